#include "subeq/linalg.hpp"

namespace subeq {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::sampler_exhausted: return "sampler_exhausted";
    case ErrorKind::non_hyperbolic: return "non_hyperbolic";
    case ErrorKind::singular_map: return "singular_map";
    case ErrorKind::degenerate_geometry: return "degenerate_geometry";
    case ErrorKind::bracket_failure: return "bracket_failure";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

namespace {

constexpr double kStructureTol = 1e-12;

bool near(const SymMatrix& a, const SymMatrix& b) {
  return (a - b).cwiseAbs().maxCoeff() <= kStructureTol;
}

}  // namespace

ComplexStructure ComplexStructure::standard_complex(int m) {
  require(m >= 1 && 2 * m <= kMaxDim, ErrorKind::invalid_argument, "standard_complex: bad m");
  SymMatrix j = SymMatrix::Zero(2 * m, 2 * m);
  for (int b = 0; b < m; ++b) {
    j(2 * b + 1, 2 * b) = 1.0;
    j(2 * b, 2 * b + 1) = -1.0;
  }
  return from_generators(Kind::complex, {j});
}

ComplexStructure ComplexStructure::standard_quaternionic(int m) {
  require(m >= 1 && 4 * m <= kMaxDim, ErrorKind::invalid_argument, "standard_quaternionic: bad m");
  const int n = 4 * m;
  SymMatrix qi = SymMatrix::Zero(n, n);
  SymMatrix qj = SymMatrix::Zero(n, n);
  SymMatrix qk = SymMatrix::Zero(n, n);
  // q = a + b i + c j + d k stored as (a, b, c, d); left multiplication:
  //   i q = -b + a i - d j + c k
  //   j q = -c + d i + a j - b k
  //   k q = -d - c i + b j + a k
  for (int blk = 0; blk < m; ++blk) {
    const int o = 4 * blk;
    auto set = [o](SymMatrix& g, int row, int col, double v) { g(o + row, o + col) = v; };
    set(qi, 0, 1, -1); set(qi, 1, 0, 1); set(qi, 2, 3, -1); set(qi, 3, 2, 1);
    set(qj, 0, 2, -1); set(qj, 1, 3, 1); set(qj, 2, 0, 1); set(qj, 3, 1, -1);
    set(qk, 0, 3, -1); set(qk, 1, 2, -1); set(qk, 2, 1, 1); set(qk, 3, 0, 1);
  }
  return from_generators(Kind::quaternionic, {qi, qj, qk});
}

ComplexStructure ComplexStructure::from_generators(Kind kind, std::vector<SymMatrix> generators) {
  const std::size_t expected = kind == Kind::complex ? 1 : 3;
  require(generators.size() == expected, ErrorKind::invalid_argument,
          "ComplexStructure: wrong number of generators");
  const Eigen::Index n = generators.front().rows();
  const int mult = kind == Kind::complex ? 2 : 4;
  require(n >= mult && n % mult == 0, ErrorKind::dimension_mismatch,
          "ComplexStructure: ambient dimension must be a multiple of 2 (complex) or 4 (quaternionic)");
  const SymMatrix id = SymMatrix::Identity(n, n);
  for (const auto& g : generators) {
    require(g.rows() == n && g.cols() == n, ErrorKind::dimension_mismatch,
            "ComplexStructure: generator sizes differ");
    require(near(g * g, -id), ErrorKind::invalid_argument, "ComplexStructure: generator does not square to -Id");
    require(near(g.transpose() * g, id), ErrorKind::invalid_argument, "ComplexStructure: generator not orthogonal");
  }
  if (kind == Kind::quaternionic) {
    require(near(generators[0] * generators[1], generators[2]), ErrorKind::invalid_argument,
            "ComplexStructure: quaternionic triple violates IJ = K");
  }
  return ComplexStructure(kind, static_cast<int>(n / mult), std::move(generators));
}

SymMatrix hermitian_part(const SymMatrix& a, const ComplexStructure& c) {
  require(a.rows() == c.ambient_dim() && a.cols() == a.rows(), ErrorKind::dimension_mismatch,
          "hermitian_part: matrix dimension does not match the structure");
  const SymMatrix s = symmetric_from_upper(a);
  SymMatrix out = s;
  for (const auto& g : c.generators()) out -= g * s * g;
  out /= static_cast<double>(c.generators().size() + 1);
  return 0.5 * (out + out.transpose());
}

}  // namespace subeq
