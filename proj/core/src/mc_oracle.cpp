#include "levcap/mc_oracle.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <thread>
#include <vector>

namespace levcap {

namespace {

// --- counter-seeded RNG: xoshiro256++ with splitmix64 stream derivation ---

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed ^ (stream * 0xD1B54A32D192ED03ULL + 1);
    for (auto& w : s_) w = splitmix64(sm);
    have_normal_ = false;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in (0, 1]
  double uniform() { return ((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // standard normal, Marsaglia polar method
  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return cached_;
    }
    double v1, v2, s;
    do {
      v1 = 2.0 * uniform() - 1.0;
      v2 = 2.0 * uniform() - 1.0;
      s = v1 * v1 + v2 * v2;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v2 * f;
    have_normal_ = true;
    return v1 * f;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
  bool have_normal_;
  double cached_;
};

// e^d for |d| << 1 (diffusion increments); degree-5 Taylor, relative error
// below 1e-12 for |d| < 0.05.
inline double exp_small(double d) {
  return 1.0 +
         d * (1.0 +
              d * (0.5 + d * (1.0 / 6.0 + d * (1.0 / 24.0 + d / 120.0))));
}

constexpr int kFun = 8;

struct BlockSums {
  double sum[kFun] = {0};
  double sumsq[kFun] = {0};
  std::int64_t n = 0;
};

struct PathOut {
  double v[kFun];
};

McEstimate finish(const std::vector<BlockSums>& blocks, int idx,
                  std::int64_t n) {
  double s = 0.0, ss = 0.0;
  for (const auto& b : blocks) {
    s += b.sum[idx];
    ss += b.sumsq[idx];
  }
  const double mean = s / n;
  const double var = std::max(0.0, (ss / n - mean * mean)) * n / (n - 1.0);
  return McEstimate{mean, std::sqrt(var / n), n};
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

void McConfig::validate(double r) const {
  if (n_paths < 1) throw std::invalid_argument("McConfig: n_paths must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("McConfig: dt must be > 0");
  if (!(std::exp(-r * horizon) < 1e-6))
    throw std::invalid_argument(
        "McConfig: horizon too short, need e^{-r*horizon} < 1e-6");
}

McFunctionals simulate_functionals(const ModelInstance& inst, double x,
                                   double B, const McConfig& config) {
  config.validate(inst.market.r);
  if (!(x > B)) throw std::domain_error("simulate_functionals: requires x > B");

  const double r = inst.market.r;
  const double m = inst.debt.m;
  const double mu = inst.levy.mu;
  const double sigma = inst.levy.sigma;
  const double lambda = inst.levy.lambda;
  const double beta = inst.levy.beta;
  const double dt = config.dt;
  const double T = config.horizon;
  const double f1_flow = f1(inst.debt, inst.market);
  const double f2_cap = inst.debt.P * inst.market.gamma_hat * inst.market.rho_hat;
  const double ec = std::exp(inst.costs.c_tax);

  const double mu_dt = mu * dt;
  const double sig_sqdt = sigma * std::sqrt(dt);
  const double er_dt = std::exp(-r * dt);
  const double em_dt = std::exp(-m * dt);
  const double bridge_scale = 2.0 / (sigma * sigma * dt);
  const bool bridge = config.bridge_correction;
  const double expB = std::exp(B);

  auto run_path = [&](std::int64_t ip) -> PathOut {
    Rng rng(config.seed, static_cast<std::uint64_t>(ip));

    double X = x;
    double V = std::exp(x);
    double t = 0.0;
    double disc_r = 1.0;  // e^{-rt}
    double disc_m = 1.0;  // e^{-mt}
    double m2 = 0.0;
    double g_prev = std::min(V, ec);  // f2/f2_cap * e^{c}... see below
    // trapezoid accumulates disc_r * min(V, e^c); scaled by f2_cap/e^c at end
    double tau = -1.0;
    double X_tau = 0.0;
    double disc_r_tau = 0.0, disc_m_tau = 0.0;

    double next_jump =
        lambda > 0.0 ? rng.exponential(lambda)
                     : std::numeric_limits<double>::infinity();

    while (t < T) {
      double h = dt;
      bool jump_now = false;
      double dr = er_dt, dm = em_dt;
      if (next_jump <= t + dt) {
        h = next_jump - t;
        jump_now = true;
        dr = std::exp(-r * h);
        dm = std::exp(-m * h);
      }
      // diffusion sub-step of length h
      const double z = rng.normal();
      const double dX = (jump_now ? mu * h : mu_dt) +
                        (jump_now ? sigma * std::sqrt(h) : sig_sqdt) * z;
      const double X1 = X + dX;
      const double disc_r1 = disc_r * dr;
      const double disc_m1 = disc_m * dm;

      if (X1 <= B) {
        // grid detection: the continuous path crossed within the step (creep)
        const double frac = (X - B) / (X - X1);
        tau = t + frac * h;
        X_tau = B;
        disc_r_tau = disc_r * std::exp(-r * frac * h);
        disc_m_tau = disc_m * std::exp(-m * frac * h);
        m2 += 0.5 * (frac * h) * (disc_r * g_prev + disc_r_tau * std::min(expB, ec));
        break;
      }
      const double bsc = jump_now ? 2.0 / (sigma * sigma * h) : bridge_scale;
      // skip the bridge draw when the crossing probability is below ~1e-18
      if (bridge && (X - B) * (X1 - B) * bsc < 41.5) {
        const double p = std::exp(-bsc * (X - B) * (X1 - B));
        if (rng.uniform() < p) {
          tau = t + 0.5 * h;  // midpoint of the sub-interval
          X_tau = B;
          disc_r_tau = disc_r * std::exp(-r * 0.5 * h);
          disc_m_tau = disc_m * std::exp(-m * 0.5 * h);
          m2 += 0.5 * (0.5 * h) * (disc_r * g_prev + disc_r_tau * std::min(expB, ec));
          break;
        }
      }
      // survive the diffusion sub-step; accumulate the f2 integral
      const double V1 = (std::abs(dX) < 0.05) ? V * exp_small(dX)
                                              : V * std::exp(dX);
      const double g1 = std::min(V1, ec);
      m2 += 0.5 * h * (disc_r * g_prev + disc_r1 * g1);
      X = X1;
      V = V1;
      t += h;
      disc_r = disc_r1;
      disc_m = disc_m1;
      g_prev = g1;

      if (jump_now) {
        const double jump = rng.exponential(beta);
        X -= jump;
        V = std::exp(X);
        next_jump = t + rng.exponential(lambda);
        if (X <= B) {
          tau = t;
          X_tau = X;  // overshoot below the barrier
          disc_r_tau = disc_r;
          disc_m_tau = disc_m;
          break;
        }
        g_prev = std::min(V, ec);
      }
    }

    PathOut out{};
    const double scale_f2 = f2_cap / ec;
    const double m2_r = m2 * scale_f2;
    double lam_r = 0.0, lam_rm = 0.0, gam = 0.0, m1 = 0.0;
    const double rm = r + m;
    if (tau >= 0.0) {
      const double eta_tau = inst.costs.eta(X_tau);
      lam_r = disc_r_tau * eta_tau;
      lam_rm = disc_r_tau * disc_m_tau * eta_tau;
      gam = disc_r_tau * disc_m_tau * std::exp(X_tau);
      m1 = f1_flow * (1.0 - disc_r_tau * disc_m_tau) / rm;
    } else {
      m1 = f1_flow * (1.0 - disc_r * disc_m) / rm;
    }
    const double firm_v = std::exp(x) + m2_r - lam_r;
    const double debt_v = m1 + gam - lam_rm;
    out.v[0] = lam_r;
    out.v[1] = lam_rm;
    out.v[2] = m1;
    out.v[3] = m2_r;
    out.v[4] = gam;
    out.v[5] = firm_v - debt_v;  // equity
    out.v[6] = debt_v;
    out.v[7] = firm_v;
    return out;
  };

  const std::int64_t n = config.n_paths;
  constexpr std::int64_t kBlock = 1024;
  const std::int64_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<BlockSums> blocks(n_blocks);
  std::atomic<std::int64_t> next_block{0};

  auto worker = [&]() {
    for (;;) {
      const std::int64_t ib = next_block.fetch_add(1);
      if (ib >= n_blocks) return;
      BlockSums bs;
      const std::int64_t lo = ib * kBlock;
      const std::int64_t hi = std::min(n, lo + kBlock);
      for (std::int64_t ip = lo; ip < hi; ++ip) {
        const PathOut po = run_path(ip);
        for (int k = 0; k < kFun; ++k) {
          bs.sum[k] += po.v[k];
          bs.sumsq[k] += po.v[k] * po.v[k];
        }
      }
      bs.n = hi - lo;
      blocks[ib] = bs;
    }
  };

  const int nthreads = resolve_threads(config.threads);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  McFunctionals out;
  out.lambda_r = finish(blocks, 0, n);
  out.lambda_rm = finish(blocks, 1, n);
  out.m1_rm = finish(blocks, 2, n);
  out.m2_r = finish(blocks, 3, n);
  out.gamma_term = finish(blocks, 4, n);
  out.equity = finish(blocks, 5, n);
  out.debt = finish(blocks, 6, n);
  out.firm = finish(blocks, 7, n);
  return out;
}

McEstimate simulate_discounted_terminal_asset(const LevyParams& levy,
                                              const MarketParams& market,
                                              double x, double T,
                                              const McConfig& config) {
  if (config.n_paths < 2)
    throw std::invalid_argument("simulate_discounted_terminal_asset: n_paths");
  const double disc = std::exp(-(market.r - market.delta) * T);
  double s = 0.0, ss = 0.0;
  for (std::int64_t ip = 0; ip < config.n_paths; ++ip) {
    Rng rng(config.seed, static_cast<std::uint64_t>(ip));
    double X = x + levy.mu * T + levy.sigma * std::sqrt(T) * rng.normal();
    if (levy.lambda > 0.0) {
      // exact compound Poisson: jump times are irrelevant for X_T
      double t = rng.exponential(levy.lambda);
      while (t < T) {
        X -= rng.exponential(levy.beta);
        t += rng.exponential(levy.lambda);
      }
    }
    const double v = disc * std::exp(X);
    s += v;
    ss += v * v;
  }
  const double n = static_cast<double>(config.n_paths);
  const double mean = s / n;
  const double var = std::max(0.0, ss / n - mean * mean) * n / (n - 1.0);
  return McEstimate{mean, std::sqrt(var / n), config.n_paths};
}

}  // namespace levcap
