#include "condlight/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "condlight/special_functions.hpp"

namespace condlight::oracles {

namespace {

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureSum {
  double value = 0.0;
  double error = 0.0;
};

template <class F>
QuadratureSum integrate_panels(const F& f, double a, double b) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  QuadratureSum total;
  if (!(b > a)) return total;
  const int panels = std::max(1, static_cast<int>(std::ceil(b - a)));
  const double width = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == panels) ? b : lo + width;
    double err = 0.0;
    total.value += Rule::integrate(f, lo, hi, 15, 1e-13, &err);
    total.error += err;
  }
  return total;
}

double finite_extent(const AcceptanceWindow& w) {
  double extent = w.x0();
  for (const auto& iv : w.general_intervals()) {
    if (std::isfinite(iv.lo)) extent = std::max(extent, std::abs(iv.lo));
    if (std::isfinite(iv.hi)) extent = std::max(extent, std::abs(iv.hi));
  }
  return extent;
}

// Probability that mean + N(0, sd^2) lands in the window.
double gaussian_window_probability(const AcceptanceWindow& w, double mean, double sd) {
  const double scale = 1.0 / (sd * std::sqrt(2.0));
  if (w.is_threshold()) {
    return 0.5 * (sf::erfc((w.x0() - mean) * scale) + sf::erfc((w.x0() + mean) * scale));
  }
  double p = 0.0;
  for (const auto& iv : w.general_intervals()) {
    p += 0.5 * (sf::erfc((iv.lo - mean) * scale) - sf::erfc((iv.hi - mean) * scale));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Sampling

constexpr std::uint64_t kChunkShots = 1u << 14;

using Engine = std::mt19937_64;

Engine chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return Engine(seq);
}

double gaussian_density(double x, double sd) {
  return std::exp(-0.5 * x * x / (sd * sd)) / (sd * std::sqrt(2.0 * sf::kPi));
}

// Rejection sampler for psi_n(x)^2 with a N(0, n + 1) envelope. The bound on
// psi_n^2 / envelope is found by a grid scan fine enough to resolve the
// outermost lobe, then inflated by 5%.
class FockQuadratureSampler {
 public:
  explicit FockQuadratureSampler(int n_table) : bounds_(scan_bounds(n_table)) {}

  double sample(int n, Engine& engine) const {
    const double sd = envelope_sd(n);
    const double bound = n < static_cast<int>(bounds_.size()) ? bounds_[n] : scan_bounds(n)[n];
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    for (;;) {
      const double x = sd * normal(engine);
      const double u = uniform(engine);
      if (u * bound * gaussian_density(x, sd) <= sf::fock_quadrature_pdf(n, x)) return x;
    }
  }

 private:
  static double envelope_sd(int n) { return std::sqrt(static_cast<double>(n) + 1.0); }

  static std::vector<double> scan_bounds(int n_max) {
    const double turning = std::sqrt(2.0 * n_max + 1.0);
    const double extent = turning + 8.0;
    const double step = std::min(0.01, 0.05 / turning);
    std::vector<double> ratio_max(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (double x = 0.0; x <= extent; x += step) {
      const auto psi = sf::oscillator_eigenfunctions(x, n_max);
      for (int n = 0; n <= n_max; ++n) {
        const double ratio = psi[n] * psi[n] / gaussian_density(x, envelope_sd(n));
        ratio_max[n] = std::max(ratio_max[n], ratio);
      }
    }
    for (double& b : ratio_max) b *= 1.05;
    return ratio_max;
  }

  std::vector<double> bounds_;
};

struct Shot {
  int n;
  double x;
};

class ShotSimulator {
 public:
  ShotSimulator(const Squeezing& s, const DetectorModel& d, std::uint64_t shots)
      : lambda_(s.lambda()),
        log_lambda_(lambda_ > 0.0 ? std::log(lambda_) : 0.0),
        sqrt_eta_(std::sqrt(d.eta())),
        aux_sd_(std::sqrt((1.0 - d.eta()) * (1.0 + 2.0 * d.n_bar()) / 2.0)),
        fock_(table_size(lambda_, shots)) {}

  Shot draw(Engine& engine) const {
    std::uniform_real_distribution<double> uniform;
    int n = 0;
    if (lambda_ > 0.0) {
      // Inverse CDF of the geometric law: P(n >= k) = lambda^k.
      const double u = 1.0 - uniform(engine);
      const double k = std::floor(std::log(u) / log_lambda_);
      n = static_cast<int>(std::min(k, static_cast<double>(std::numeric_limits<int>::max())));
    }
    // psi_n^2 is the same for every local-oscillator phase, so no phase is drawn.
    double x = sqrt_eta_ * fock_.sample(n, engine);
    if (aux_sd_ > 0.0) {
      std::normal_distribution<double> normal;
      x += aux_sd_ * normal(engine);
    }
    return {n, x};
  }

 private:
  static int table_size(double lambda, std::uint64_t shots) {
    if (lambda <= 0.0) return 0;
    const double n = std::log(1.0 / static_cast<double>(shots)) / std::log(lambda);
    return static_cast<int>(std::clamp(std::ceil(n) + 5.0, 10.0, 400.0));
  }

  double lambda_;
  double log_lambda_;
  double sqrt_eta_;
  double aux_sd_;
  FockQuadratureSampler fock_;
};

template <class ChunkFn>
void for_each_chunk(std::uint64_t shots, unsigned workers, ChunkFn fn) {
  const std::uint64_t chunks = (shots + kChunkShots - 1) / kChunkShots;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));
  std::atomic<std::uint64_t> next{0};
  auto run = [&](unsigned worker) {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      const std::uint64_t begin = c * kChunkShots;
      fn(worker, c, begin, std::min(shots, begin + kChunkShots));
    }
  };
  if (workers <= 1) {
    run(0);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(run, i);
  for (auto& t : pool) t.join();
}

void validate_shots(std::uint64_t shots) {
  if (shots < 1) throw std::invalid_argument("monte carlo: shots must be >= 1");
}

MonteCarloResult summarize(std::vector<std::uint64_t> counts, std::uint64_t shots,
                           std::uint64_t seed) {
  MonteCarloResult r;
  r.shots = shots;
  r.seed = seed;
  while (!counts.empty() && counts.back() == 0) counts.pop_back();
  for (auto c : counts) r.accepted += c;
  r.counts = std::move(counts);
  r.empirical_C = static_cast<double>(r.accepted) / static_cast<double>(shots);
  r.standard_errors.acceptance_probability =
      std::sqrt(r.empirical_C * (1.0 - r.empirical_C) / static_cast<double>(shots));
  if (r.accepted < 100) {
    r.warning = "only " + std::to_string(r.accepted) + " accepted shots; estimates are unreliable";
  }
  if (r.accepted == 0) return r;

  const long double total = static_cast<long double>(r.accepted);
  long double m[5] = {0, 0, 0, 0, 0};
  for (std::size_t n = 0; n < r.counts.size(); ++n) {
    const long double weight = static_cast<long double>(r.counts[n]) / total;
    long double power = 1.0L;
    for (int k = 0; k <= 4; ++k) {
      m[k] += weight * power;
      power *= static_cast<long double>(n);
    }
  }
  r.empirical_p.reserve(r.counts.size());
  r.standard_errors.p.reserve(r.counts.size());
  for (auto c : r.counts) {
    const double p = static_cast<double>(static_cast<long double>(c) / total);
    r.empirical_p.push_back(p);
    r.standard_errors.p.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(total)));
  }
  const double m1 = static_cast<double>(m[1]);
  const double m2 = static_cast<double>(m[2]);
  const double variance = static_cast<double>(m[2] - m[1] * m[1]);
  r.empirical_mean = m1;
  r.standard_errors.mean = std::sqrt(std::max(variance, 0.0) / static_cast<double>(total));
  if (m1 > 0.0) {
    r.empirical_Q = variance / m1 - 1.0;
    // Delta method on Q = m2/m1 - m1 - 1 with the sample covariance of (n, n^2).
    const double var_m1 = variance / static_cast<double>(total);
    const double var_m2 = static_cast<double>(m[4] - m[2] * m[2]) / static_cast<double>(total);
    const double cov = static_cast<double>(m[3] - m[1] * m[2]) / static_cast<double>(total);
    const double g1 = -m2 / (m1 * m1) - 1.0;
    const double g2 = 1.0 / m1;
    r.standard_errors.mandel_q =
        std::sqrt(std::max(0.0, g1 * g1 * var_m1 + g2 * g2 * var_m2 + 2.0 * g1 * g2 * cov));
  }
  return r;
}

}  // namespace

double qn_quadrature(int n, const AcceptanceWindow& w, const DetectorModel& detector) {
  if (n < 0) throw std::invalid_argument("qn_quadrature: n must be >= 0");
  const double extent = std::max({20.0, finite_extent(w) + 15.0, std::sqrt(2.0 * n + 1.0) + 15.0});
  const auto pdf = [n](double x) { return sf::fock_quadrature_pdf(n, x); };

  QuadratureSum result;
  double target = 1e-10;
  if (detector.eta() == 1.0) {
    if (w.is_threshold()) {
      result = integrate_panels(pdf, w.x0(), extent);
      result.value *= 2.0;
      result.error *= 2.0;
    } else {
      for (const auto& iv : w.general_intervals()) {
        const auto part =
            integrate_panels(pdf, std::max(iv.lo, -extent), std::min(iv.hi, extent));
        result.value += part.value;
        result.error += part.error;
      }
    }
  } else {
    target = 1e-8;
    const double sqrt_eta = std::sqrt(detector.eta());
    const double noise_sd =
        std::sqrt((1.0 - detector.eta()) * (1.0 + 2.0 * detector.n_bar()) / 2.0);
    const auto smeared = [&](double x) {
      return sf::fock_quadrature_pdf(n, x) * gaussian_window_probability(w, sqrt_eta * x, noise_sd);
    };
    result = integrate_panels(smeared, -extent, extent);
  }
  if (!(result.error <= target) || !std::isfinite(result.value)) {
    throw QuadratureError("qn_quadrature: error estimate " + std::to_string(result.error) +
                          " exceeds target for n = " + std::to_string(n));
  }
  return result.value;
}

MonteCarloResult monte_carlo_experiment(const Squeezing& s, const AcceptanceWindow& w,
                                        const DetectorModel& detector, std::uint64_t shots,
                                        std::uint64_t seed, unsigned workers) {
  validate_shots(shots);
  const ShotSimulator sim(s, detector, shots);
  const unsigned slots = std::max(1u, workers == 0 ? std::thread::hardware_concurrency() : workers);
  std::vector<std::vector<std::uint64_t>> per_worker(slots);

  for_each_chunk(shots, slots, [&](unsigned worker, std::uint64_t chunk, std::uint64_t begin,
                                   std::uint64_t end) {
    auto& counts = per_worker[worker];
    Engine engine = chunk_engine(seed, chunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      const Shot shot = sim.draw(engine);
      if (!w.contains(shot.x)) continue;
      if (static_cast<std::size_t>(shot.n) >= counts.size()) counts.resize(shot.n + 1, 0);
      ++counts[shot.n];
    }
  });

  std::vector<std::uint64_t> counts;
  for (const auto& local : per_worker) {
    if (local.size() > counts.size()) counts.resize(local.size(), 0);
    for (std::size_t n = 0; n < local.size(); ++n) counts[n] += local[n];
  }
  return summarize(std::move(counts), shots, seed);
}

std::vector<double> sample_detected_quadratures(const Squeezing& s, const DetectorModel& detector,
                                                std::uint64_t shots, std::uint64_t seed,
                                                unsigned workers) {
  validate_shots(shots);
  const ShotSimulator sim(s, detector, shots);
  std::vector<double> xs(shots);
  for_each_chunk(shots, workers, [&](unsigned, std::uint64_t chunk, std::uint64_t begin,
                                     std::uint64_t end) {
    Engine engine = chunk_engine(seed, chunk);
    for (std::uint64_t i = begin; i < end; ++i) xs[i] = sim.draw(engine).x;
  });
  return xs;
}

}  // namespace condlight::oracles
