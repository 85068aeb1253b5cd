// SPDX-License-Identifier: Apache-2.0
#include "qatp/amplify.hpp"

#include <cmath>
#include <numbers>

#include "qatp/errors.hpp"

namespace qatp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kZeroMass = 1e-12;

double chebyshev(double L, double x) {
  if (std::abs(x) <= 1.0) return std::cos(L * std::acos(x));
  double v = std::cosh(L * std::acosh(std::abs(x)));
  return (x < 0 && std::fmod(L, 2.0) == 1.0) ? -v : v;
}

struct RoundOutcome {
  double mass = 0;
  bool flag = false;
  MeasureOutcome out;
};

// Reflection phases for one round with l iterations.
void round_phases(const SearchSpec& spec, std::uint64_t l, std::vector<double>& tp, std::vector<double>& zp) {
  tp.assign(l, kPi);
  zp.assign(l, kPi);
  if (spec.schedule == Schedule::Grover) return;
  std::vector<double> alpha = fixed_point_phases(l, spec.delta);
  for (std::uint64_t k = 0; k < l; ++k) {
    tp[k] = alpha[l - 1 - k];
    zp[k] = alpha[k];
  }
}

std::vector<Qubit> measured(const SearchSpec& spec) {
  std::vector<Qubit> q = spec.output;
  q.push_back(spec.flag);
  return q;
}

MeasureOutcome strip_flag(const MeasureOutcome& o) {
  std::vector<bool> bits(o.bits.begin(), o.bits.end() - 1);
  return outcome_from_bits(std::move(bits));
}

std::string sample(const std::map<std::string, double>& dist, std::mt19937_64& rng) {
  double total = 0;
  for (const auto& [k, p] : dist) total += p;
  double r = std::uniform_real_distribution<double>(0.0, total)(rng);
  for (const auto& [k, p] : dist) {
    if (r < p) return k;
    r -= p;
  }
  return dist.rbegin()->first;
}

RoundOutcome run_subspace(double lambda, const std::map<std::string, double>& good,
                          const std::map<std::string, double>& bad, const std::vector<double>& tp,
                          const std::vector<double>& zp, std::size_t out_width, std::mt19937_64& rng) {
  const double sg = std::sqrt(lambda), sb = std::sqrt(1.0 - lambda);
  Amplitude cg(sg, 0.0), cb(sb, 0.0);
  for (std::size_t k = 0; k < tp.size(); ++k) {
    cg *= std::polar(1.0, tp[k]);
    Amplitude ov = sg * cg + sb * cb;
    Amplitude f = (1.0 - std::polar(1.0, zp[k])) * ov;
    cg -= f * sg;
    cb -= f * sb;
  }
  RoundOutcome r;
  r.mass = std::norm(cg);
  r.flag = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < r.mass;
  const auto& dist = r.flag ? good : bad;
  std::vector<bool> bits(out_width, false);
  if (!dist.empty()) {
    std::string key = sample(dist, rng);
    for (std::size_t b = 0; b < out_width; ++b) bits[b] = key[out_width - 1 - b] == '1';
  }
  r.out = outcome_from_bits(std::move(bits));
  return r;
}

RoundOutcome run_circuit(const SearchSpec& spec, const std::vector<double>& tp, const std::vector<double>& zp,
                         std::mt19937_64& rng) {
  Circuit c = amplification_circuit(spec, tp, zp);
  auto b = make_backend(spec.backend, c.num_qubits());
  b->apply(c);
  RoundOutcome r;
  r.mass = b->probability_one(spec.flag);
  MeasureOutcome m = b->measure(measured(spec), rng);
  r.flag = m.bits.back();
  r.out = strip_flag(m);
  return r;
}

}  // namespace

std::string to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "Found";
    case SearchStatus::NotFound: return "NotFound";
    case SearchStatus::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

std::unique_ptr<Backend> make_backend(BackendKind kind, std::size_t n) {
  if (kind == BackendKind::Sparse) return std::make_unique<SparseState>(n);
  return std::make_unique<StateVector>(n);
}

Circuit zero_reflection(const Circuit& a, double theta) {
  const std::size_t n = a.num_qubits();
  if (n == 0) throw PreconditionError("reflection over an empty register");
  Circuit c(n);
  c.append(a.inverse());
  std::vector<Control> zeros;
  for (Qubit q = 1; q < n; ++q) zeros.push_back({q, false});
  c.add(make_x(0));
  c.add(make_phase(0, theta, zeros));
  c.add(make_x(0));
  c.append(a);
  return c;
}

Circuit flag_reflection(std::size_t num_qubits, Qubit flag, double theta) {
  if (flag >= num_qubits) throw PreconditionError("flag qubit out of range");
  Circuit c(num_qubits);
  c.add(make_phase(flag, theta));
  return c;
}

std::uint64_t fixed_point_length(double delta, double lambda_min) {
  if (!(delta > 0 && delta < 1)) throw PreconditionError("delta must lie in (0,1)");
  if (!(lambda_min > 0 && lambda_min <= 1)) throw PreconditionError("lambda_min must lie in (0,1]");
  double x = std::log(2.0 / delta) / std::sqrt(lambda_min);
  auto L = static_cast<std::uint64_t>(std::ceil(x - 1e-12));
  if (L % 2 == 0) ++L;
  return std::max<std::uint64_t>(L, 1);
}

std::vector<double> fixed_point_phases(std::uint64_t l, double delta) {
  if (!(delta > 0 && delta < 1)) throw PreconditionError("delta must lie in (0,1)");
  const double L = static_cast<double>(2 * l + 1);
  const double gamma = 1.0 / std::cosh(std::acosh(1.0 / delta) / L);
  const double root = std::sqrt(1.0 - gamma * gamma);
  std::vector<double> alpha(l);
  for (std::uint64_t j = 1; j <= l; ++j)
    alpha[j - 1] = 2.0 * std::atan2(1.0, std::tan(2.0 * kPi * static_cast<double>(j) / L) * root);
  return alpha;
}

double fixed_point_success(std::uint64_t L, double delta, double lambda) {
  const double Ld = static_cast<double>(L);
  const double t = chebyshev(1.0 / Ld, 1.0 / delta);
  const double v = chebyshev(Ld, t * std::sqrt(1.0 - lambda));
  return 1.0 - delta * delta * v * v;
}

double grover_success(std::uint64_t k, double lambda) {
  double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * std::asin(std::sqrt(lambda)));
  return s * s;
}

Circuit amplification_circuit(const SearchSpec& spec, const std::vector<double>& target_phases,
                              const std::vector<double>& zero_phases) {
  const std::size_t n = spec.state_prep.num_qubits();
  if (spec.oracle.num_qubits() != n) throw PreconditionError("oracle and state preparation widths differ");
  if (spec.flag >= n) throw PreconditionError("flag qubit out of range");
  if (target_phases.size() != zero_phases.size()) throw PreconditionError("phase lists differ in length");
  Circuit c(n);
  const Circuit oracle_inv = spec.oracle.inverse();
  c.append(spec.state_prep);
  for (std::size_t k = 0; k < target_phases.size(); ++k) {
    c.append(spec.oracle);
    c.add(make_phase(spec.flag, target_phases[k]));
    c.append(oracle_inv);
    c.append(zero_reflection(spec.state_prep, zero_phases[k]));
  }
  c.append(spec.oracle);
  return c;
}

Searcher::Searcher(SearchSpec spec) : spec_(std::move(spec)) {
  const std::size_t n = spec_.state_prep.num_qubits();
  if (spec_.oracle.num_qubits() != n) throw PreconditionError("oracle and state preparation widths differ");
  if (spec_.flag >= n) throw PreconditionError("flag qubit out of range");
  for (Qubit q : spec_.output)
    if (q >= n || q == spec_.flag) throw PreconditionError("bad output qubit");
  if (!(spec_.delta > 0 && spec_.delta < 1)) throw PreconditionError("delta must lie in (0,1)");
  if (spec_.budget == 0) throw PreconditionError("query budget must be positive");
}

void Searcher::prepare() {
  if (prepared_) return;
  auto b = make_backend(spec_.backend, spec_.state_prep.num_qubits());
  b->apply(spec_.state_prep);
  b->apply(spec_.oracle);
  lambda_ = b->probability_one(spec_.flag);
  for (const auto& [k, p] : b->distribution(measured(spec_))) {
    // The flag is the last measured qubit, so it leads the bitstring.
    if (k[0] == '1') good_[k.substr(1)] += p;
    else bad_[k.substr(1)] += p;
  }
  for (auto& [k, p] : good_) p /= lambda_;
  for (auto& [k, p] : bad_) p /= (1.0 - lambda_);
  prepared_ = true;
}

double Searcher::initial_mass() {
  prepare();
  return lambda_;
}

const std::map<std::string, double>& Searcher::marked_outputs() {
  prepare();
  return good_;
}

SearchResult fixed_point_search(const SearchSpec& spec, std::mt19937_64& rng) { return Searcher(spec).run(rng); }

SearchResult Searcher::run(std::mt19937_64& rng) {
  const SearchSpec& spec = spec_;
  SearchResult res;
  const bool sub = spec.mode == SimMode::Subspace;
  if (sub) {
    prepare();
    res.initial_mass = lambda_;
  }

  double grover_m = 1.0;
  for (std::uint64_t round = 0;; ++round) {
    std::uint64_t l = 0;
    if (spec.schedule == Schedule::FixedPoint) {
      if (spec.lambda_min) l = (fixed_point_length(spec.delta, *spec.lambda_min) - 1) / 2;
      else if (round > 0) l = (fixed_point_length(spec.delta, std::pow(0.25, static_cast<double>(round - 1))) - 1) / 2;
    } else if (spec.grover_iterations) {
      l = *spec.grover_iterations;
    } else if (round > 0) {
      l = std::uniform_int_distribution<std::uint64_t>(0, static_cast<std::uint64_t>(std::ceil(grover_m)) - 1)(rng);
      grover_m *= 6.0 / 5.0;
    }
    const std::uint64_t left = spec.budget - res.queries_used;
    if (left == 0) {
      res.status = SearchStatus::BudgetExhausted;
      return res;
    }
    if (l + 1 > left) {
      // Adaptive growth stops once the next round no longer fits.
      if (!spec.lambda_min && !spec.grover_iterations && round > 0) {
        res.status = SearchStatus::BudgetExhausted;
        return res;
      }
      l = left - 1;
    }

    std::vector<double> tp, zp;
    round_phases(spec, l, tp, zp);
    RoundOutcome r = sub ? run_subspace(lambda_, good_, bad_, tp, zp, spec.output.size(), rng)
                         : run_circuit(spec, tp, zp, rng);

    res.rounds += 1;
    res.last_iterations = l;
    res.queries_used += l + 1;
    res.counter.add(spec.oracle_label, l + 1);
    res.counter.merge(spec.state_prep.calls(), 2 * l + 1);
    res.counter.merge(spec.oracle.calls(), 2 * l + 1);
    res.success_prob_estimate = r.mass;
    res.outcome = r.out;
    // Grover iterates can cancel a nonzero marked fraction; only trust a zero
    // mass from the fixed-point sequence or from A|0> itself.
    if (r.mass < kZeroMass && (spec.schedule == Schedule::FixedPoint || l == 0)) {
      res.status = SearchStatus::NotFound;
      res.exact_zero = true;
      return res;
    }
    if (r.flag) {
      res.status = SearchStatus::Found;
      return res;
    }
  }
}

}  // namespace qatp
