// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qatp/errors.hpp"
#include "qatp/qsim.hpp"

namespace qatp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDrop = 1e-24;  // squared magnitude below which entries vanish

}  // namespace

SparseState::SparseState(std::size_t n) : n_(n), words_(std::max<std::size_t>(1, (n + 63) / 64)) { reset(); }

void SparseState::reset() {
  keys_.assign(words_, 0);
  amps_.assign(1, Amplitude(1.0, 0.0));
  fourier_.clear();
}

bool SparseState::bit(std::size_t e, Qubit q) const { return (keys_[e * words_ + q / 64] >> (q % 64)) & 1; }

void SparseState::set_bit(std::size_t e, Qubit q, bool v) {
  std::uint64_t& w = keys_[e * words_ + q / 64];
  const std::uint64_t m = std::uint64_t{1} << (q % 64);
  w = v ? (w | m) : (w & ~m);
}

std::uint64_t SparseState::reg_value(std::size_t e, const std::vector<Qubit>& reg) const {
  std::uint64_t v = 0;
  for (std::size_t b = 0; b < reg.size(); ++b)
    if (bit(e, reg[b])) v |= std::uint64_t{1} << b;
  return v;
}

void SparseState::set_reg_value(std::size_t e, const std::vector<Qubit>& reg, std::uint64_t v) {
  for (std::size_t b = 0; b < reg.size(); ++b) set_bit(e, reg[b], (v >> b) & 1);
}

bool SparseState::controls_ok(std::size_t e, const std::vector<Control>& cs) const {
  for (const auto& c : cs)
    if (bit(e, c.qubit) != c.value) return false;
  return true;
}

void SparseState::materialize_touching(const std::vector<Qubit>& qs) {
  for (std::size_t f = 0; f < fourier_.size();) {
    bool hit = std::any_of(fourier_[f].begin(), fourier_[f].end(),
                           [&](Qubit q) { return std::find(qs.begin(), qs.end(), q) != qs.end(); });
    if (!hit) {
      ++f;
      continue;
    }
    std::vector<Qubit> reg = fourier_[f];
    fourier_.erase(fourier_.begin() + static_cast<std::ptrdiff_t>(f));
    explicit_dft(reg, false);
    ++materializations_;
  }
}

void SparseState::materialize_all() {
  while (!fourier_.empty()) {
    std::vector<Qubit> reg = fourier_.back();
    fourier_.pop_back();
    explicit_dft(reg, false);
    ++materializations_;
  }
}

void SparseState::explicit_dft(const std::vector<Qubit>& reg, bool inverse) {
  const std::size_t w = reg.size();
  if (w > 20) throw CapacityError("register too wide to transform explicitly");
  const std::uint64_t dim = std::uint64_t{1} << w;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  const double sign = inverse ? -1.0 : 1.0;
  std::vector<Amplitude> root(dim);
  for (std::uint64_t t = 0; t < dim; ++t)
    root[t] = std::polar(1.0, sign * 2.0 * kPi * static_cast<double>(t) / static_cast<double>(dim));

  // Group entries by the bits outside the register.
  const std::size_t m = amps_.size();
  std::vector<std::uint64_t> masked(keys_);
  for (std::size_t e = 0; e < m; ++e)
    for (Qubit q : reg) masked[e * words_ + q / 64] &= ~(std::uint64_t{1} << (q % 64));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto key_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(masked.begin() + a * words_, masked.begin() + (a + 1) * words_,
                                        masked.begin() + b * words_, masked.begin() + (b + 1) * words_);
  };
  std::sort(order.begin(), order.end(), key_less);

  std::vector<std::uint64_t> nkeys;
  std::vector<Amplitude> namps;
  std::vector<Amplitude> out(dim);
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    while (j < m && !key_less(order[i], order[j]) && !key_less(order[j], order[i])) ++j;
    std::fill(out.begin(), out.end(), Amplitude(0.0, 0.0));
    for (std::size_t k = i; k < j; ++k) {
      const std::uint64_t x = reg_value(order[k], reg);
      const Amplitude a = amps_[order[k]];
      for (std::uint64_t y = 0; y < dim; ++y) out[y] += a * root[(x * y) & (dim - 1)];
    }
    for (std::uint64_t y = 0; y < dim; ++y) {
      Amplitude a = out[y] * scale;
      if (std::norm(a) < kDrop) continue;
      std::size_t base = nkeys.size();
      nkeys.insert(nkeys.end(), masked.begin() + order[i] * words_, masked.begin() + (order[i] + 1) * words_);
      for (std::size_t b = 0; b < w; ++b)
        if ((y >> b) & 1) nkeys[base + reg[b] / 64] |= std::uint64_t{1} << (reg[b] % 64);
      namps.push_back(a);
    }
    i = j;
  }
  keys_ = std::move(nkeys);
  amps_ = std::move(namps);
}

void SparseState::merge() {
  const std::size_t m = amps_.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto cmp = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(keys_.begin() + a * words_, keys_.begin() + (a + 1) * words_,
                                        keys_.begin() + b * words_, keys_.begin() + (b + 1) * words_);
  };
  std::sort(order.begin(), order.end(), cmp);
  std::vector<std::uint64_t> nkeys;
  std::vector<Amplitude> namps;
  nkeys.reserve(keys_.size());
  namps.reserve(m);
  for (std::size_t i = 0; i < m;) {
    std::size_t j = i;
    Amplitude sum(0.0, 0.0);
    while (j < m && !cmp(order[i], order[j])) sum += amps_[order[j++]];
    if (std::norm(sum) >= kDrop) {
      nkeys.insert(nkeys.end(), keys_.begin() + order[i] * words_, keys_.begin() + (order[i] + 1) * words_);
      namps.push_back(sum);
    }
    i = j;
  }
  keys_ = std::move(nkeys);
  amps_ = std::move(namps);
}

void SparseState::apply(const Gate& g) {
  std::vector<Qubit> touched = g.targets;
  for (const auto& c : g.controls) touched.push_back(c.qubit);
  for (Qubit q : touched)
    if (q >= n_) throw PreconditionError("gate operand out of range");

  auto exact = std::find(fourier_.begin(), fourier_.end(), g.targets);
  if (g.kind == GateKind::PhaseAdd && exact != fourier_.end()) {
    std::vector<Qubit> cq;
    for (const auto& c : g.controls) cq.push_back(c.qubit);
    materialize_touching(cq);
    const std::size_t m = amps_.size();
    const std::uint64_t mask = (std::uint64_t{1} << g.targets.size()) - 1;
    for (std::size_t e = 0; e < m; ++e)
      if (controls_ok(e, g.controls))
        set_reg_value(e, g.targets, (reg_value(e, g.targets) + static_cast<std::uint64_t>(g.addend)) & mask);
    return;
  }
  if (g.kind == GateKind::IQFT && exact != fourier_.end()) {
    fourier_.erase(exact);
    return;
  }
  materialize_touching(touched);
  if (g.kind == GateKind::QFT) {
    if (!g.controls.empty()) throw PreconditionError("controlled QFT is not supported");
    fourier_.push_back(g.targets);
    return;
  }

  const std::size_t m = amps_.size();
  switch (g.kind) {
    case GateKind::H: {
      const Qubit t = g.targets[0];
      const double s = 1.0 / std::sqrt(2.0);
      std::vector<std::uint64_t> nkeys;
      std::vector<Amplitude> namps;
      nkeys.reserve(keys_.size() * 2);
      namps.reserve(m * 2);
      for (std::size_t e = 0; e < m; ++e) {
        auto first = keys_.begin() + e * words_;
        if (!controls_ok(e, g.controls)) {
          nkeys.insert(nkeys.end(), first, first + words_);
          namps.push_back(amps_[e]);
          continue;
        }
        const bool one = bit(e, t);
        for (int v = 0; v < 2; ++v) {
          std::size_t base = nkeys.size();
          nkeys.insert(nkeys.end(), first, first + words_);
          std::uint64_t& w = nkeys[base + t / 64];
          const std::uint64_t msk = std::uint64_t{1} << (t % 64);
          w = v ? (w | msk) : (w & ~msk);
          namps.push_back(amps_[e] * ((one && v) ? -s : s));
        }
      }
      keys_ = std::move(nkeys);
      amps_ = std::move(namps);
      merge();
      break;
    }
    case GateKind::X:
      for (std::size_t e = 0; e < m; ++e)
        if (controls_ok(e, g.controls)) set_bit(e, g.targets[0], !bit(e, g.targets[0]));
      break;
    case GateKind::Z:
    case GateKind::Phase: {
      const Amplitude f = g.kind == GateKind::Z ? Amplitude(-1.0, 0.0) : std::polar(1.0, g.theta);
      for (std::size_t e = 0; e < m; ++e)
        if (bit(e, g.targets[0]) && controls_ok(e, g.controls)) amps_[e] *= f;
      break;
    }
    case GateKind::Swap:
      for (std::size_t e = 0; e < m; ++e)
        if (controls_ok(e, g.controls)) {
          bool a = bit(e, g.targets[0]), b = bit(e, g.targets[1]);
          set_bit(e, g.targets[0], b);
          set_bit(e, g.targets[1], a);
        }
      break;
    case GateKind::IQFT:
      explicit_dft(g.targets, true);
      break;
    case GateKind::PhaseAdd: {
      const std::uint64_t mask = (std::uint64_t{1} << g.targets.size()) - 1;
      const double dim = std::ldexp(1.0, static_cast<int>(g.targets.size()));
      for (std::size_t e = 0; e < m; ++e)
        if (controls_ok(e, g.controls)) {
          std::uint64_t k = reg_value(e, g.targets);
          std::uint64_t t = (static_cast<std::uint64_t>(g.addend) * k) & mask;
          amps_[e] *= std::polar(1.0, 2.0 * kPi * static_cast<double>(t) / dim);
        }
      break;
    }
    case GateKind::QFT:
      break;
  }
}

double SparseState::probability_one(Qubit q) {
  if (q >= n_) throw PreconditionError("qubit out of range");
  materialize_touching({q});
  double p = 0;
  for (std::size_t e = 0; e < amps_.size(); ++e)
    if (bit(e, q)) p += std::norm(amps_[e]);
  return p;
}

std::map<std::string, double> SparseState::distribution(const std::vector<Qubit>& qubits) {
  for (Qubit q : qubits)
    if (q >= n_) throw PreconditionError("qubit out of range");
  materialize_touching(qubits);
  std::map<std::string, double> out;
  std::string key(qubits.size(), '0');
  for (std::size_t e = 0; e < amps_.size(); ++e) {
    for (std::size_t b = 0; b < qubits.size(); ++b) key[qubits.size() - 1 - b] = bit(e, qubits[b]) ? '1' : '0';
    out[key] += std::norm(amps_[e]);
  }
  return out;
}

MeasureOutcome SparseState::measure(const std::vector<Qubit>& qubits, std::mt19937_64& rng) {
  auto dist = distribution(qubits);
  double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0;
  std::string chosen = dist.rbegin()->first;
  for (const auto& [k, p] : dist) {
    acc += p;
    if (r < acc) {
      chosen = k;
      break;
    }
  }
  std::vector<bool> bits(qubits.size());
  for (std::size_t b = 0; b < bits.size(); ++b) bits[b] = chosen[bits.size() - 1 - b] == '1';
  std::vector<std::uint64_t> nkeys;
  std::vector<Amplitude> namps;
  double keep = 0;
  for (std::size_t e = 0; e < amps_.size(); ++e) {
    bool match = true;
    for (std::size_t b = 0; b < qubits.size() && match; ++b) match = bit(e, qubits[b]) == bits[b];
    if (!match) continue;
    nkeys.insert(nkeys.end(), keys_.begin() + e * words_, keys_.begin() + (e + 1) * words_);
    namps.push_back(amps_[e]);
    keep += std::norm(amps_[e]);
  }
  const double s = 1.0 / std::sqrt(keep);
  for (auto& a : namps) a *= s;
  keys_ = std::move(nkeys);
  amps_ = std::move(namps);
  return outcome_from_bits(bits);
}

double SparseState::norm() {
  double s = 0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

Amplitude SparseState::amplitude(const std::vector<bool>& bits) {
  materialize_all();
  for (std::size_t e = 0; e < amps_.size(); ++e) {
    bool match = true;
    for (Qubit q = 0; q < n_ && match; ++q) match = bit(e, q) == (q < bits.size() && bits[q]);
    if (match) return amps_[e];
  }
  return {0.0, 0.0};
}

}  // namespace qatp
