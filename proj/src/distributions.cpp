#include "randmeans/distributions.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace randmeans {

namespace {

constexpr double kEulerE = 2.71828182845904523536;
constexpr double kProbSumTol = 1e-12;
constexpr double kEigenClip = 1e-10;

void validate_probs(const std::vector<double>& probs) {
  if (probs.empty()) fail(ErrorCode::invalid, "distribution: no atoms");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p > 0.0) || p > 1.0 || !std::isfinite(p))
      fail(ErrorCode::invalid, "distribution: atom probabilities must lie in (0, 1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTol)
    fail(ErrorCode::invalid, "distribution: atom probabilities must sum to 1");
}

} // namespace

ScalarDist::ScalarDist(Node node) : node_(std::move(node)) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          if (!(d.q > 0.0 && d.q < 1.0))
            fail(ErrorCode::invalid, "bernoulli: q must lie in (0, 1)");
        } else if constexpr (std::is_same_v<T, FiniteDiscrete>) {
          if (d.atoms.size() != d.probs.size())
            fail(ErrorCode::invalid, "finite discrete: atom/probability count mismatch");
          validate_probs(d.probs);
          for (double a : d.atoms)
            if (!std::isfinite(a))
              fail(ErrorCode::invalid, "finite discrete: atoms must be finite");
          for (std::size_t i = 0; i < d.atoms.size(); ++i)
            for (std::size_t j = i + 1; j < d.atoms.size(); ++j)
              if (d.atoms[i] == d.atoms[j])
                fail(ErrorCode::invalid, "finite discrete: atoms must be distinct");
        } else if constexpr (std::is_same_v<T, Dirac>) {
          if (!std::isfinite(d.a))
            fail(ErrorCode::invalid, "dirac: atom must be finite");
        }
      },
      node_);
}

double sample(const ScalarDist& d, RngStream& rng) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          return rng.uniform01() < n.q ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, FiniteDiscrete>) {
          double u = rng.uniform01();
          for (std::size_t i = 0; i + 1 < n.atoms.size(); ++i) {
            u -= n.probs[i];
            if (u < 0.0) return n.atoms[i];
          }
          return n.atoms.back();
        } else if constexpr (std::is_same_v<T, Uniform01>) {
          return rng.uniform01();
        } else if constexpr (std::is_same_v<T, TriangularDensity>) {
          return std::sqrt(rng.uniform01());
        } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
          // F(t) = (e/(e-1)) (1 - e^{-t}) on (0, 1)
          return -std::log1p(-rng.uniform01() * (kEulerE - 1.0) / kEulerE);
        } else if constexpr (std::is_same_v<T, SineDensity>) {
          // F(t) = (1 - cos t) / (1 - cos 1) on (0, 1)
          return std::acos(1.0 - rng.uniform01() * (1.0 - std::cos(1.0)));
        } else {
          return n.a;
        }
      },
      d.node());
}

ScalarMoments moments(const ScalarDist& d) {
  return std::visit(
      [](const auto& n) -> ScalarMoments {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          return {n.q, n.q * (1.0 - n.q)};
        } else if constexpr (std::is_same_v<T, FiniteDiscrete>) {
          double m = 0.0, m2 = 0.0;
          for (std::size_t i = 0; i < n.atoms.size(); ++i) {
            m += n.probs[i] * n.atoms[i];
            m2 += n.probs[i] * n.atoms[i] * n.atoms[i];
          }
          return {m, m2 - m * m};
        } else if constexpr (std::is_same_v<T, Uniform01>) {
          return {0.5, 1.0 / 12.0};
        } else if constexpr (std::is_same_v<T, TriangularDensity>) {
          return {2.0 / 3.0, 1.0 / 18.0};
        } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
          const double m = (kEulerE - 2.0) / (kEulerE - 1.0);
          const double m2 = (2.0 * kEulerE - 5.0) / (kEulerE - 1.0);
          return {m, m2 - m * m};
        } else if constexpr (std::is_same_v<T, SineDensity>) {
          const double c = std::cos(1.0), s = std::sin(1.0);
          const double m = (s - c) / (1.0 - c);
          const double m2 = (c + 2.0 * s - 2.0) / (1.0 - c);
          return {m, m2 - m * m};
        } else {
          return {n.a, 0.0};
        }
      },
      d.node());
}

double cdf(const ScalarDist& d, double x) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          if (x < 0.0) return 0.0;
          if (x < 1.0) return 1.0 - n.q;
          return 1.0;
        } else if constexpr (std::is_same_v<T, FiniteDiscrete>) {
          double s = 0.0;
          for (std::size_t i = 0; i < n.atoms.size(); ++i)
            if (n.atoms[i] <= x) s += n.probs[i];
          return s;
        } else if constexpr (std::is_same_v<T, Uniform01>) {
          return std::clamp(x, 0.0, 1.0);
        } else if constexpr (std::is_same_v<T, TriangularDensity>) {
          const double t = std::clamp(x, 0.0, 1.0);
          return t * t;
        } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
          const double t = std::clamp(x, 0.0, 1.0);
          return kEulerE / (kEulerE - 1.0) * -std::expm1(-t);
        } else if constexpr (std::is_same_v<T, SineDensity>) {
          const double t = std::clamp(x, 0.0, 1.0);
          return (1.0 - std::cos(t)) / (1.0 - std::cos(1.0));
        } else {
          return x >= n.a ? 1.0 : 0.0;
        }
      },
      d.node());
}

double support_lo(const ScalarDist& d) {
  return std::visit(
      [](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Bernoulli>)
          return 0.0;
        else if constexpr (std::is_same_v<T, FiniteDiscrete>)
          return *std::min_element(n.atoms.begin(), n.atoms.end());
        else if constexpr (std::is_same_v<T, Dirac>)
          return n.a;
        else
          return 0.0;
      },
      d.node());
}

double support_hi(const ScalarDist& d) {
  return std::visit(
      [](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Bernoulli>)
          return 1.0;
        else if constexpr (std::is_same_v<T, FiniteDiscrete>)
          return *std::max_element(n.atoms.begin(), n.atoms.end());
        else if constexpr (std::is_same_v<T, Dirac>)
          return n.a;
        else
          return 1.0;
      },
      d.node());
}

bool support_in_open01(const ScalarDist& d) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Bernoulli>)
          return false; // atoms 0 and 1
        else if constexpr (std::is_same_v<T, FiniteDiscrete>)
          return support_lo(d) > 0.0 && support_hi(d) < 1.0;
        else if constexpr (std::is_same_v<T, Dirac>)
          return n.a > 0.0 && n.a < 1.0;
        else
          return true; // densities on (0, 1); sampler never returns 0 or 1
      },
      d.node());
}

bool support_in_closed01(const ScalarDist& d) {
  return support_lo(d) >= 0.0 && support_hi(d) <= 1.0;
}

VectorDist::VectorDist(Node node) : node_(std::move(node)) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ProductOfScalars>) {
          if (d.components.empty())
            fail(ErrorCode::invalid, "product law: no components");
        } else if constexpr (std::is_same_v<T, SimplexUniform>) {
          if (d.dim < 1) fail(ErrorCode::invalid, "simplex law: dim must be >= 1");
        } else {
          if (d.atoms.size() != d.probs.size())
            fail(ErrorCode::invalid, "finite discrete vector: atom/probability count mismatch");
          validate_probs(d.probs);
          const std::size_t dim = d.atoms.front().size();
          if (dim == 0) fail(ErrorCode::invalid, "finite discrete vector: empty atoms");
          for (const auto& a : d.atoms) {
            if (a.size() != dim)
              fail(ErrorCode::invalid, "finite discrete vector: atoms disagree on dimension");
            for (double v : a)
              if (!std::isfinite(v))
                fail(ErrorCode::invalid, "finite discrete vector: atoms must be finite");
          }
          for (std::size_t i = 0; i < d.atoms.size(); ++i)
            for (std::size_t j = i + 1; j < d.atoms.size(); ++j)
              if (d.atoms[i] == d.atoms[j])
                fail(ErrorCode::invalid, "finite discrete vector: atoms must be distinct");
        }
      },
      node_);
}

int VectorDist::dim() const {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, ProductOfScalars>)
          return static_cast<int>(d.components.size());
        else if constexpr (std::is_same_v<T, SimplexUniform>)
          return d.dim;
        else
          return static_cast<int>(d.atoms.front().size());
      },
      node_);
}

std::vector<double> sample(const VectorDist& d, RngStream& rng) {
  return std::visit(
      [&](const auto& n) -> std::vector<double> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ProductOfScalars>) {
          std::vector<double> y(n.components.size());
          for (std::size_t i = 0; i < n.components.size(); ++i)
            y[i] = sample(n.components[i], rng);
          return y;
        } else if constexpr (std::is_same_v<T, SimplexUniform>) {
          std::vector<double> u(static_cast<std::size_t>(n.dim));
          for (double& v : u) v = rng.uniform01();
          std::sort(u.begin(), u.end());
          std::vector<double> y(u.size());
          double prev = 0.0;
          for (std::size_t i = 0; i < u.size(); ++i) {
            y[i] = u[i] - prev;
            prev = u[i];
          }
          return y;
        } else {
          double u = rng.uniform01();
          for (std::size_t i = 0; i + 1 < n.atoms.size(); ++i) {
            u -= n.probs[i];
            if (u < 0.0) return n.atoms[i];
          }
          return n.atoms.back();
        }
      },
      d.node());
}

VectorMoments moments(const VectorDist& d) {
  return std::visit(
      [](const auto& n) -> VectorMoments {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ProductOfScalars>) {
          const int k = static_cast<int>(n.components.size());
          VectorMoments out{std::vector<double>(static_cast<std::size_t>(k)),
                            CovMatrix::zero(k)};
          for (int i = 0; i < k; ++i) {
            const ScalarMoments m = moments(n.components[static_cast<std::size_t>(i)]);
            out.mean[static_cast<std::size_t>(i)] = m.mean;
            out.cov.at(i, i) = m.var;
          }
          return out;
        } else if constexpr (std::is_same_v<T, SimplexUniform>) {
          // Dirichlet(1, ..., 1) marginals of the slack-augmented vector.
          const int k = n.dim;
          const double denom = (k + 1.0) * (k + 1.0) * (k + 2.0);
          VectorMoments out{
              std::vector<double>(static_cast<std::size_t>(k), 1.0 / (k + 1.0)),
              CovMatrix::zero(k)};
          for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
              out.cov.at(i, j) = (i == j ? k : -1.0) / denom;
          return out;
        } else {
          const int k = static_cast<int>(n.atoms.front().size());
          VectorMoments out{std::vector<double>(static_cast<std::size_t>(k), 0.0),
                            CovMatrix::zero(k)};
          for (std::size_t t = 0; t < n.atoms.size(); ++t)
            for (int i = 0; i < k; ++i)
              out.mean[static_cast<std::size_t>(i)] +=
                  n.probs[t] * n.atoms[t][static_cast<std::size_t>(i)];
          for (std::size_t t = 0; t < n.atoms.size(); ++t)
            for (int i = 0; i < k; ++i)
              for (int j = 0; j < k; ++j)
                out.cov.at(i, j) +=
                    n.probs[t] *
                    (n.atoms[t][static_cast<std::size_t>(i)] - out.mean[static_cast<std::size_t>(i)]) *
                    (n.atoms[t][static_cast<std::size_t>(j)] - out.mean[static_cast<std::size_t>(j)]);
          return out;
        }
      },
      d.node());
}

double support_upper_bound_sum(const VectorDist& d) {
  return std::visit(
      [](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ProductOfScalars>) {
          double s = 0.0;
          for (const ScalarDist& c : n.components) s += support_hi(c);
          return s;
        } else if constexpr (std::is_same_v<T, SimplexUniform>) {
          return 1.0;
        } else {
          double worst = 0.0;
          for (const auto& a : n.atoms) {
            double s = 0.0;
            for (double v : a) s += v;
            worst = std::max(worst, s);
          }
          return worst;
        }
      },
      d.node());
}

CovMatrix multinomial_covariance(std::span<const double> probs) {
  validate_probs(std::vector<double>(probs.begin(), probs.end()));
  const int k = static_cast<int>(probs.size());
  CovMatrix q = CovMatrix::zero(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      q.at(i, j) = i == j ? probs[static_cast<std::size_t>(i)] * (1.0 - probs[static_cast<std::size_t>(i)])
                          : -probs[static_cast<std::size_t>(i)] * probs[static_cast<std::size_t>(j)];
  return q;
}

std::vector<double> sample_gaussian(const CovMatrix& cov, RngStream& rng) {
  const int k = cov.n;
  if (k < 1 || static_cast<std::size_t>(k) * k != cov.a.size())
    fail(ErrorCode::invalid, "gaussian: covariance must be square");
  double scale = 0.0;
  for (double v : cov.a) {
    if (!std::isfinite(v)) fail(ErrorCode::invalid, "gaussian: covariance must be finite");
    scale = std::max(scale, std::abs(v));
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (std::abs(cov.at(i, j) - cov.at(j, i)) > 1e-9 * std::max(1.0, scale))
        fail(ErrorCode::invalid, "gaussian: covariance must be symmetric");

  Eigen::MatrixXd m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      m(i, j) = 0.5 * (cov.at(i, j) + cov.at(j, i));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::invalid, "gaussian: eigendecomposition failed");

  Eigen::VectorXd lambda = solver.eigenvalues();
  for (int i = 0; i < k; ++i) {
    if (lambda(i) < -kEigenClip)
      fail(ErrorCode::invalid, "gaussian: covariance is indefinite");
    // Magnitudes within solver precision of zero are structural zeros
    // (e.g. the all-ones null direction of a multinomial covariance);
    // keeping a +1e-17 roundoff eigenvalue would inject sqrt(lambda) ~
    // 1e-8 noise into a direction that should carry none.
    if (lambda(i) < kEigenClip) lambda(i) = 0.0;
  }
  // One standard normal per dimension, zero-variance directions included,
  // so the stream position after a draw is independent of the rank.
  Eigen::VectorXd z(k);
  for (int i = 0; i < k; ++i) z(i) = rng.normal();
  Eigen::VectorXd x = solver.eigenvectors() * lambda.cwiseSqrt().asDiagonal() * z;
  return std::vector<double>(x.data(), x.data() + k);
}

} // namespace randmeans
