#include "delaycert/suites.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

namespace delaycert {

namespace {

struct Instance {
  BasisSet basis;
  WeightFn weight;
  Interval domain;
  int n;
  TestSignal signal;
  SymMat u;
};

double uni(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uni_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

BasisSet random_basis(std::mt19937_64& rng, const Interval& domain) {
  switch (uni_int(rng, 0, 2)) {
    case 0:
      return BasisSet::monomial(uni_int(rng, 1, 5), domain);
    case 1:
      return BasisSet::legendre(uni_int(rng, 1, 5), domain);
    default:
      return BasisSet::trig_block(uni(rng, 0.5, 14.0), domain);
  }
}

WeightFn random_weight(std::mt19937_64& rng) {
  const int p = uni_int(rng, 0, 2);
  switch (uni_int(rng, 0, 2)) {
    case 0:
      return WeightFn::one();
    case 1:
      return WeightFn::power_left(p);
    default:
      return WeightFn::power_right(p);
  }
}

TestSignal random_signal(std::mt19937_64& rng, int n) {
  // degree <= 6 polynomial plus one sin/cos pair per component
  Matrix poly(n, 7);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 7; ++j) poly(i, j) = uni(rng, -2.0, 2.0);
  Vector sa(n), ca(n);
  for (int i = 0; i < n; ++i) {
    sa(i) = uni(rng, -2.0, 2.0);
    ca(i) = uni(rng, -2.0, 2.0);
  }
  const double ws = uni(rng, 0.5, 3.0);
  TestSignal sig;
  sig.n = n;
  sig.eval = [poly, sa, ca, ws, n](double tau) {
    Vector out(n);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0, p = 1.0;
      for (int j = 0; j < poly.cols(); ++j) {
        acc += poly(i, j) * p;
        p *= tau;
      }
      out(i) = acc + sa(i) * std::sin(ws * tau) + ca(i) * std::cos(ws * tau);
    }
    return out;
  };
  return sig;
}

SymMat random_spd(std::mt19937_64& rng, int n) {
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = uni(rng, -1.0, 1.0);
  return SymMat::symmetrize(a.transpose() * a +
                            1e-3 * Matrix::Identity(n, n));
}

Instance random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double a = uni(rng, -2.0, 0.5);
  const Interval domain(a, a + uni(rng, 0.3, 2.5));
  BasisSet basis = random_basis(rng, domain);
  WeightFn weight = random_weight(rng);
  const int n = uni_int(rng, 1, 3);
  TestSignal sig = random_signal(rng, n);
  SymMat u = random_spd(rng, n);
  return Instance{std::move(basis), weight, domain, n, std::move(sig), u};
}

/// Admissible certificate from the Schur boundary plus PSD noise:
/// Y = X^T U^{-1} X + Q^T Q satisfies the block condition by construction.
FreeMatrixCert random_admissible_cert(std::mt19937_64& rng, const SymMat& u,
                                      int d, int n, int rho) {
  const int q = rho * n;
  Matrix x(n, d * q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d * q; ++j) x(i, j) = uni(rng, -1.0, 1.0);
  Matrix qn(d * q, d * q);
  for (int i = 0; i < d * q; ++i)
    for (int j = 0; j < d * q; ++j) qn(i, j) = uni(rng, -0.5, 0.5);
  FreeMatrixCert cert;
  cert.rho = rho;
  cert.X = x;
  cert.X_hat = stack_rows_to_cols(x, d);
  cert.Y = SymMat::symmetrize(x.transpose() * sym_inverse(u).mat() * x +
                              qn.transpose() * qn);
  return cert;
}

/// Signal whose moment vector is exactly theta0 (up to quadrature):
/// x = F^T omega with omega = (gram_inv kron I) theta0.
TestSignal signal_with_moment(const GramData& g, const Vector& theta0, int n) {
  const Vector omega =
      kron(g.gram_inv.mat(), Matrix::Identity(n, n)) * theta0;
  const BasisSet basis = g.basis;
  TestSignal sig;
  sig.n = n;
  sig.eval = [basis, omega, n](double tau) {
    const Vector f = basis.eval_unchecked(tau);
    Vector out = Vector::Zero(n);
    for (int i = 0; i < basis.dim(); ++i)
      out += f(i) * omega.segment(i * n, n);
    return out;
  };
  return sig;
}

/// Runs fn(i) for i in [0, count) over `workers` threads, deterministically
/// indexed so the result order is independent of scheduling. The first
/// worker exception is rethrown on the calling thread.
template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  workers = std::max(1, workers);
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<SuiteRecord> dominance_suite(BoundKind kind, const SuiteOptions& opt) {
  std::vector<SuiteRecord> out(opt.count);
  const QuadratureConfig cfg;
  parallel_for(opt.count, opt.workers, [&](int i) {
    const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(i);
    Instance inst = random_instance(seed);
    SuiteRecord rec;
    rec.seed = seed;
    rec.family = to_string(inst.basis.family());
    const GramData g = gram_matrix(inst.basis, inst.weight, inst.domain, cfg);
    FreeMatrixCert cert;
    if (kind != BoundKind::gram) {
      std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
      cert = random_admissible_cert(rng, inst.u, inst.basis.dim(), inst.n, 1);
      if (kind == BoundKind::free_matrix) {
        cert.z = Vector(inst.n);
        for (int k = 0; k < inst.n; ++k) cert.z(k) = uni(rng, -2.0, 2.0);
      } else {
        // reduced bound needs Upsilon z = theta
        const MomentVector th =
            moment(g.basis, g.weight, g.domain, inst.signal.eval, inst.n, cfg);
        cert.z = Vector(inst.n);
        for (int k = 0; k < inst.n; ++k) cert.z(k) = uni(rng, 0.5, 2.0);
        cert.Upsilon = th.theta * cert.z.transpose() / cert.z.squaredNorm();
      }
    }
    const VerifyReport rep = verify_inequality(
        inst.signal, inst.u, g, kind, kind == BoundKind::gram ? nullptr : &cert,
        cfg, opt.tol);
    rec.lhs = rep.lhs;
    rec.bound = rep.bound;
    rec.gap = rep.gap;
    rec.pass = rep.pass;
    out[i] = rec;
  });
  return out;
}

std::vector<ChainRecord> ordering_chain_suite(const SuiteOptions& opt) {
  std::vector<ChainRecord> out(opt.count);
  const QuadratureConfig cfg;
  parallel_for(opt.count, opt.workers, [&](int i) {
    const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(i);
    Instance inst = random_instance(seed);
    std::mt19937_64 rng(seed ^ 0xcafef00dd15ea5e5ull);
    const GramData g = gram_matrix(inst.basis, inst.weight, inst.domain, cfg);
    const int d = inst.basis.dim();
    const int n = inst.n;

    FreeMatrixCert cert = random_admissible_cert(rng, inst.u, d, n, 1);
    cert.z = Vector(n);
    for (int k = 0; k < n; ++k) cert.z(k) = uni(rng, 0.5, 2.0);
    Matrix upsilon(d * n, n);
    for (int r = 0; r < d * n; ++r)
      for (int c = 0; c < n; ++c) upsilon(r, c) = uni(rng, -1.0, 1.0);
    cert.Upsilon = upsilon;
    const Vector theta0 = upsilon * cert.z;

    const TestSignal sig = signal_with_moment(g, theta0, n);
    const MomentVector theta =
        moment(g.basis, g.weight, g.domain, sig.eval, n, cfg);

    const SymMat w =
        w_matrix(cert.Y, g.basis, g.weight, g.domain, cert.rho, n, cfg);
    ChainRecord rec;
    rec.seed = seed;
    rec.free_bound = free_matrix_bound(theta, cert, w, inst.u);
    rec.cor2_bound =
        corollary2_bound(theta, cert.Upsilon, cert.z, cert.X_hat, g, inst.u);
    rec.gram_bnd = gram_bound(theta, g, inst.u);
    const double slack =
        opt.tol * std::max(1.0, std::abs(rec.gram_bnd));
    rec.pass = rec.free_bound <= rec.cor2_bound + slack &&
               rec.cor2_bound <= rec.gram_bnd + slack;
    out[i] = rec;
  });
  return out;
}

std::vector<OptimalityRecord> optimality_suite(const SuiteOptions& opt) {
  std::vector<OptimalityRecord> out(opt.count);
  const QuadratureConfig cfg;
  parallel_for(opt.count, opt.workers, [&](int i) {
    const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(i);
    Instance inst = random_instance(seed);
    std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dull);
    const GramData g = gram_matrix(inst.basis, inst.weight, inst.domain, cfg);
    const int d = inst.basis.dim();
    const int n = inst.n;

    Vector z(n);
    for (int k = 0; k < n; ++k) z(k) = uni(rng, 0.5, 2.0);
    Matrix upsilon(d * n, n);
    for (int r = 0; r < d * n; ++r)
      for (int c = 0; c < n; ++c) upsilon(r, c) = uni(rng, -1.0, 1.0);
    const Vector theta0 = upsilon * z;
    const TestSignal sig = signal_with_moment(g, theta0, n);
    const MomentVector theta =
        moment(g.basis, g.weight, g.domain, sig.eval, n, cfg);

    auto [x_hat, y] = optimal_completion(g, inst.u, upsilon, n);
    FreeMatrixCert cert;
    cert.rho = 1;
    cert.X_hat = x_hat;
    cert.X = unstack_cols_to_rows(x_hat, d);
    cert.Y = y;
    cert.Upsilon = upsilon;
    cert.z = z;

    const SymMat w = w_matrix(y, g.basis, g.weight, g.domain, 1, n, cfg);
    const double fb = free_matrix_bound(theta, cert, w, inst.u);
    const double cb = corollary2_bound(theta, upsilon, z, x_hat, g, inst.u);
    const double gb = gram_bound(theta, g, inst.u);
    const double scale = std::max(1.0, std::abs(gb));
    OptimalityRecord rec;
    rec.seed = seed;
    rec.rel_gap_free = std::abs(fb - gb) / scale;
    rec.rel_gap_cor2 = std::abs(cb - gb) / scale;
    rec.pass = rec.rel_gap_free <= opt.tol && rec.rel_gap_cor2 <= opt.tol;
    out[i] = rec;
  });
  return out;
}

std::vector<LeastSquaresRecord> least_squares_suite(const SuiteOptions& opt,
                                                    int perturbations) {
  std::vector<LeastSquaresRecord> out(opt.count);
  const QuadratureConfig cfg;
  parallel_for(opt.count, opt.workers, [&](int i) {
    const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(i);
    Instance inst = random_instance(seed);
    std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dull);
    const GramData g = gram_matrix(inst.basis, inst.weight, inst.domain, cfg);
    const MomentVector theta =
        moment(g.basis, g.weight, g.domain, inst.signal.eval, inst.n, cfg);
    const Vector omega = least_squares_coeff(theta, g);

    const double res_opt = residual_energy(inst.signal, g.basis, omega, inst.u,
                                           g.weight, g.domain, cfg);
    bool beats = true;
    for (int p = 0; p < perturbations; ++p) {
      Vector delta(omega.size());
      for (int k = 0; k < delta.size(); ++k) delta(k) = uni(rng, -1.0, 1.0);
      delta *= uni(rng, 1e-3, 1e-1) / delta.norm();
      const double res_p = residual_energy(inst.signal, g.basis, omega + delta,
                                           inst.u, g.weight, g.domain, cfg);
      if (res_p < res_opt - opt.tol * std::max(1.0, res_opt)) beats = false;
    }

    const double lhs =
        lhs_energy(inst.signal, inst.u, g.weight, g.domain, cfg);
    const double gb = gram_bound(theta, g, inst.u);
    LeastSquaresRecord rec;
    rec.seed = seed;
    rec.minimum_beats_perturbations = beats;
    rec.identity_rel_err =
        std::abs((lhs - gb) - res_opt) / std::max(1.0, std::abs(lhs));
    rec.pass = beats && rec.identity_rel_err <= opt.tol;
    out[i] = rec;
  });
  return out;
}

std::vector<EqualityRecord> equality_case_suite(const SuiteOptions& opt,
                                                double tol) {
  std::vector<EqualityRecord> out(opt.count);
  const QuadratureConfig cfg;
  parallel_for(opt.count, opt.workers, [&](int i) {
    const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(i);
    Instance inst = random_instance(seed);
    std::mt19937_64 rng(seed ^ 0x94d049bb133111ebull);
    const GramData g = gram_matrix(inst.basis, inst.weight, inst.domain, cfg);
    const int n = inst.n;
    Vector omega(g.basis.dim() * n);
    for (int k = 0; k < omega.size(); ++k) omega(k) = uni(rng, -2.0, 2.0);
    // residual-free signal: x = F^T omega
    const BasisSet basis = g.basis;
    TestSignal sig;
    sig.n = n;
    sig.eval = [basis, omega, n](double tau) {
      const Vector f = basis.eval_unchecked(tau);
      Vector outv = Vector::Zero(n);
      for (int k = 0; k < basis.dim(); ++k)
        outv += f(k) * omega.segment(k * n, n);
      return outv;
    };
    const double lhs = lhs_energy(sig, inst.u, g.weight, g.domain, cfg);
    const MomentVector theta =
        moment(g.basis, g.weight, g.domain, sig.eval, n, cfg);
    const double gb = gram_bound(theta, g, inst.u);
    EqualityRecord rec;
    rec.seed = seed;
    rec.rel_gap = std::abs(lhs - gb) / std::max(1e-30, std::abs(lhs));
    rec.pass = rec.rel_gap <= tol;
    out[i] = rec;
  });
  return out;
}

std::vector<EqualityRecord> transform_invariance_suite(const SuiteOptions& opt,
                                                       double tol) {
  std::vector<EqualityRecord> out(opt.count);
  const QuadratureConfig cfg;
  parallel_for(opt.count, opt.workers, [&](int i) {
    const std::uint64_t seed = opt.seed0 + static_cast<std::uint64_t>(i);
    Instance inst = random_instance(seed);
    std::mt19937_64 rng(seed ^ 0xbf58476d1ce4e5b9ull);
    // keep the transformed Gram well conditioned so the 1e-10 comparison
    // measures invariance rather than inversion noise
    if (inst.basis.dim() > 3 && inst.basis.family() != BasisFamily::trig_block)
      inst.basis = inst.basis.family() == BasisFamily::monomial
                       ? BasisSet::monomial(3, inst.domain)
                       : BasisSet::legendre(3, inst.domain);
    const GramData g = gram_matrix(inst.basis, inst.weight, inst.domain, cfg);
    const int d = inst.basis.dim();

    Matrix t(d, d);
    do {
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) t(r, c) = uni(rng, -1.5, 1.5);
    } while (std::abs(t.determinant()) < 0.3);

    const BasisSet base = inst.basis;
    const BasisSet transformed = BasisSet::custom(
        d, inst.domain,
        [base, t](double tau) -> Vector { return t * base.eval_unchecked(tau); });
    const GramData g2 = gram_matrix(transformed, inst.weight, inst.domain, cfg);

    const MomentVector th1 =
        moment(g.basis, g.weight, g.domain, inst.signal.eval, inst.n, cfg);
    const MomentVector th2 =
        moment(g2.basis, g2.weight, g2.domain, inst.signal.eval, inst.n, cfg);
    const double b1 = gram_bound(th1, g, inst.u);
    const double b2 = gram_bound(th2, g2, inst.u);
    EqualityRecord rec;
    rec.seed = seed;
    rec.rel_gap = std::abs(b1 - b2) / std::max(1.0, std::abs(b1));
    rec.pass = rec.rel_gap <= tol;
    out[i] = rec;
  });
  return out;
}

}  // namespace delaycert
