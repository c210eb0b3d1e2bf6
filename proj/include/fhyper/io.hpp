#pragma once

#include <iosfwd>

#include "fhyper/data.hpp"
#include "fhyper/quadrature.hpp"
#include "fhyper/spectral.hpp"

namespace fhyper {

enum class FloatFormat {
  decimal17, // %.17g
  hex,       // %a
};

/// "# torus-quadrature v1, N=<int>, degree=<int>, provenance=<str>" then x1,x2,w
/// rows. A degenerate rule is written with degree=-1.
void write_rule(std::ostream &out, const QuadratureRule &rule, FloatFormat format = FloatFormat::decimal17);
QuadratureRule read_rule(std::istream &in);

/// "# torus-dataset v1, N=<int>, noise=<descriptor>, seed=<int>" then x1,x2,y rows.
void write_dataset(std::ostream &out, const Dataset &data, FloatFormat format = FloatFormat::decimal17);
Dataset read_dataset(std::istream &in);

struct EstimatorFile {
  int degree = 0;
  int servers = 1;
  SpectralExpansion expansion;
};

/// "# torus-estimator v1, n=<int>, m=<int>" then k1,k2,re,im rows.
void write_estimator(std::ostream &out, const EstimatorFile &est);
EstimatorFile read_estimator(std::istream &in);

} // namespace fhyper
