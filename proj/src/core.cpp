#include "telex/core.hpp"

#include <cmath>
#include <sstream>

namespace telex {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::NotNilpotent: return "NotNilpotent";
    case Errc::NotRank1Recurrent: return "NotRank1Recurrent";
    case Errc::DegenerateSymmetric: return "DegenerateSymmetric";
    case Errc::InvalidScale: return "InvalidScale";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::EmptySample: return "EmptySample";
    case Errc::SimulationDiverged: return "SimulationDiverged";
  }
  return "Unknown";
}

namespace {

void require(bool ok, const char* name, double value, const char* rule) {
  if (!ok) {
    std::ostringstream os;
    os << name << " = " << value << " violates " << rule;
    throw Error(Errc::InvalidParameter, os.str());
  }
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

TelegraphParams::TelegraphParams(double c, double lambda) : c_(c), lambda_(lambda) {
  require(positive(c), "c", c, "c > 0, finite");
  require(std::isfinite(lambda) && lambda >= 0.0, "lambda", lambda, "lambda >= 0, finite");
}

DriftTelegraphParams::DriftTelegraphParams(double c0, double c1, double lambda0, double lambda1)
    : c0_(c0), c1_(c1), lambda0_(lambda0), lambda1_(lambda1) {
  require(positive(c0), "c0", c0, "c0 > 0, finite");
  require(positive(c1), "c1", c1, "c1 > 0, finite");
  require(positive(lambda0), "lambda0", lambda0, "lambda0 > 0, finite");
  require(positive(lambda1), "lambda1", lambda1, "lambda1 > 0, finite");
}

DriftTelegraphParams::DriftTelegraphParams(const TelegraphParams& p)
    : DriftTelegraphParams(p.c(), p.c(), p.lambda(), p.lambda()) {}

Interval::Interval(double a, double b) : a_(a), b_(b) {
  require(std::isfinite(a), "a", a, "finite endpoint");
  require(std::isfinite(b), "b", b, "finite endpoint");
  require(a < b, "b", b, "a < b");
}

PlanarStripProblem::PlanarStripProblem(TelegraphParams params, double L)
    : params_(params), L_(L) {
  require(params.lambda() > 0.0, "lambda", params.lambda(), "lambda > 0 in the strip");
  require(positive(L), "L", L, "L > 0, finite");
}

void validate_interval_start(const Interval& iv, double x) {
  if (!(x >= iv.a() && x <= iv.b())) {
    std::ostringstream os;
    os << "x = " << x << " outside [" << iv.a() << ", " << iv.b() << "]";
    throw Error(Errc::OutOfDomain, os.str());
  }
}

void validate_strip_start(const PlanarStripProblem& prob, double y) {
  if (!(y >= 0.0 && y <= prob.L())) {
    std::ostringstream os;
    os << "y = " << y << " outside [0, " << prob.L() << "]";
    throw Error(Errc::OutOfDomain, os.str());
  }
}

}  // namespace telex
