// SPDX-License-Identifier: Apache-2.0
#include "qatp/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <set>

#include "qatp/errors.hpp"

namespace qatp {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& msg) {
  if (!ok) throw PreconditionError(msg);
}

}  // namespace

std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::Phase: return "Phase";
    case GateKind::Swap: return "Swap";
    case GateKind::QFT: return "QFT";
    case GateKind::IQFT: return "IQFT";
    case GateKind::PhaseAdd: return "PhaseAdd";
  }
  return "?";
}

Gate Gate::inverse() const {
  Gate g = *this;
  switch (kind) {
    case GateKind::Phase: g.theta = -theta; break;
    case GateKind::QFT: g.kind = GateKind::IQFT; break;
    case GateKind::IQFT: g.kind = GateKind::QFT; break;
    case GateKind::PhaseAdd: g.addend = -addend; break;
    default: break;
  }
  return g;
}

Gate make_h(Qubit q) { return Gate{GateKind::H, {q}, {}, 0.0, 0}; }
Gate make_x(Qubit q, std::vector<Control> c) { return Gate{GateKind::X, {q}, std::move(c), 0.0, 0}; }
Gate make_z(Qubit q, std::vector<Control> c) { return Gate{GateKind::Z, {q}, std::move(c), 0.0, 0}; }
Gate make_phase(Qubit q, double theta, std::vector<Control> c) {
  return Gate{GateKind::Phase, {q}, std::move(c), theta, 0};
}
Gate make_cphase(Qubit control, Qubit target, double theta) {
  return Gate{GateKind::Phase, {target}, {{control, true}}, theta, 0};
}
Gate make_swap(Qubit a, Qubit b, std::vector<Control> c) { return Gate{GateKind::Swap, {a, b}, std::move(c), 0.0, 0}; }
Gate make_qft(std::vector<Qubit> reg) { return Gate{GateKind::QFT, std::move(reg), {}, 0.0, 0}; }
Gate make_iqft(std::vector<Qubit> reg) { return Gate{GateKind::IQFT, std::move(reg), {}, 0.0, 0}; }
Gate make_phase_add(std::vector<Qubit> reg, std::int64_t addend, std::vector<Control> c) {
  return Gate{GateKind::PhaseAdd, std::move(reg), std::move(c), 0.0, addend};
}

std::vector<Qubit> Register::qubits() const {
  std::vector<Qubit> q(width);
  for (std::size_t i = 0; i < width; ++i) q[i] = start + i;
  return q;
}

// ---------------------------------------------------------------------------
// Circuit

Register Circuit::add_register(const std::string& name, std::size_t width) {
  require(!has_register(name), "duplicate register '" + name + "'");
  Register r{name, n_, width};
  n_ += width;
  regs_.push_back(r);
  return r;
}

const Register& Circuit::reg(const std::string& name) const {
  for (const auto& r : regs_)
    if (r.name == name) return r;
  throw PreconditionError("no register named '" + name + "'");
}

bool Circuit::has_register(const std::string& name) const {
  return std::any_of(regs_.begin(), regs_.end(), [&](const Register& r) { return r.name == name; });
}

void Circuit::add(Gate g) {
  std::set<Qubit> used;
  for (Qubit q : g.targets) {
    require(q < n_, "gate target out of range");
    require(used.insert(q).second, "repeated gate target");
  }
  for (const auto& c : g.controls) {
    require(c.qubit < n_, "gate control out of range");
    require(used.insert(c.qubit).second, "control overlaps another operand");
  }
  switch (g.kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::Z:
    case GateKind::Phase:
      require(g.targets.size() == 1, "single-qubit gate needs one target");
      break;
    case GateKind::Swap:
      require(g.targets.size() == 2, "swap needs two targets");
      break;
    case GateKind::QFT:
    case GateKind::IQFT:
      require(!g.targets.empty(), "empty QFT register");
      require(g.controls.empty(), "controlled QFT is not supported");
      break;
    case GateKind::PhaseAdd:
      require(!g.targets.empty() && g.targets.size() <= 62, "PhaseAdd register width must be 1..62");
      break;
  }
  gates_.push_back(std::move(g));
}

void Circuit::append(const Circuit& sub, const std::vector<Qubit>& map, const std::vector<Control>& controls,
                     const std::string& label) {
  require(map.size() == sub.num_qubits(), "qubit map size mismatch");
  for (const auto& g : sub.gates_) {
    Gate h = g;
    for (auto& t : h.targets) t = map[t];
    for (auto& c : h.controls) c.qubit = map[c.qubit];
    if (!controls.empty()) {
      require(h.kind != GateKind::QFT && h.kind != GateKind::IQFT, "cannot control a sub-circuit containing QFT");
      h.controls.insert(h.controls.end(), controls.begin(), controls.end());
    }
    add(std::move(h));
  }
  for (const auto& [k, v] : sub.calls_) calls_[k] += v;
  if (!label.empty()) calls_[label] += 1;
}

void Circuit::append(const Circuit& sub, const std::string& label) {
  require(sub.num_qubits() <= n_, "sub-circuit wider than target");
  std::vector<Qubit> id(sub.num_qubits());
  for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
  append(sub, id, {}, label);
}

Circuit Circuit::inverse() const {
  Circuit c(n_);
  c.regs_ = regs_;
  c.calls_ = calls_;
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) c.gates_.push_back(it->inverse());
  return c;
}

std::vector<Gate> expand_gate(const Gate& g) {
  std::vector<Gate> out;
  const auto& r = g.targets;
  const std::size_t w = r.size();
  switch (g.kind) {
    case GateKind::QFT: {
      for (std::size_t i = w; i-- > 0;) {
        out.push_back(make_h(r[i]));
        for (std::size_t m = i; m-- > 0;) out.push_back(make_cphase(r[m], r[i], kPi / std::ldexp(1.0, static_cast<int>(i - m))));
      }
      for (std::size_t i = 0; i < w / 2; ++i) out.push_back(make_swap(r[i], r[w - 1 - i]));
      return out;
    }
    case GateKind::IQFT: {
      Gate f = g;
      f.kind = GateKind::QFT;
      std::vector<Gate> fwd = expand_gate(f);
      for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) out.push_back(it->inverse());
      return out;
    }
    case GateKind::PhaseAdd: {
      const std::uint64_t mod = std::uint64_t{1} << w;
      const std::uint64_t a = static_cast<std::uint64_t>(g.addend) & (mod - 1);
      for (std::size_t j = 0; j < w; ++j) {
        std::uint64_t frac = (a << j) & (mod - 1);  // angle = 2 pi frac / 2^w
        if (!frac) continue;
        double theta = 2.0 * kPi * static_cast<double>(frac) / static_cast<double>(mod);
        if (theta > kPi) theta -= 2.0 * kPi;
        out.push_back(make_phase(r[j], theta, g.controls));
      }
      return out;
    }
    default:
      return {g};
  }
}

Circuit Circuit::expanded() const {
  Circuit c(n_);
  c.regs_ = regs_;
  c.calls_ = calls_;
  for (const auto& g : gates_)
    for (auto& p : expand_gate(g)) c.gates_.push_back(std::move(p));
  return c;
}

std::size_t Circuit::depth() const {
  std::vector<std::size_t> level(n_, 0);
  std::size_t depth = 0;
  for (const auto& g : gates_)
    for (const auto& p : expand_gate(g)) {
      std::size_t l = 0;
      for (Qubit q : p.targets) l = std::max(l, level[q]);
      for (const auto& c : p.controls) l = std::max(l, level[c.qubit]);
      ++l;
      for (Qubit q : p.targets) level[q] = l;
      for (const auto& c : p.controls) level[c.qubit] = l;
      depth = std::max(depth, l);
    }
  return depth;
}

std::size_t Circuit::primitive_gate_count() const {
  std::size_t n = 0;
  for (const auto& g : gates_) n += expand_gate(g).size();
  return n;
}

void QueryCounter::merge(const std::map<std::string, std::uint64_t>& calls, std::uint64_t times) {
  for (const auto& [k, v] : calls) counts_[k] += v * times;
}

std::uint64_t QueryCounter::get(const std::string& name) const {
  auto it = counts_.find(name);
  return it == counts_.end() ? 0 : it->second;
}

MeasureOutcome outcome_from_bits(std::vector<bool> bits) {
  MeasureOutcome o;
  o.bitstring.reserve(bits.size());
  for (std::size_t i = bits.size(); i-- > 0;) o.bitstring.push_back(bits[i] ? '1' : '0');
  for (std::size_t i = 0; i < bits.size() && i < 64; ++i)
    if (bits[i]) o.value |= std::uint64_t{1} << i;
  o.bits = std::move(bits);
  return o;
}

void Backend::apply(const Circuit& c) {
  if (c.num_qubits() > num_qubits()) throw PreconditionError("circuit wider than state");
  for (const auto& g : c.gates()) apply(g);
}

void Backend::set_basis(const std::vector<bool>& bits) {
  reset();
  for (std::size_t q = 0; q < bits.size(); ++q)
    if (bits[q]) apply(make_x(q));
}

// ---------------------------------------------------------------------------
// Dense simulator

std::size_t max_dense_qubits() {
  if (const char* env = std::getenv("QATP_MAX_QUBITS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0 && v <= 40) return v;
  }
  return 26;
}

StateVector::StateVector(std::size_t n) : n_(n) {
  if (n > max_dense_qubits())
    throw CapacityError("state needs " + std::to_string(n) + " qubits, cap is " + std::to_string(max_dense_qubits()));
  amp_.assign(std::size_t{1} << n, Amplitude(0.0, 0.0));
  amp_[0] = 1.0;
}

void StateVector::reset() {
  std::fill(amp_.begin(), amp_.end(), Amplitude(0.0, 0.0));
  amp_[0] = 1.0;
}

void StateVector::check(const Gate& g) const {
  for (Qubit q : g.targets)
    if (q >= n_) throw PreconditionError("gate target out of range");
  for (const auto& c : g.controls)
    if (c.qubit >= n_) throw PreconditionError("gate control out of range");
}

namespace {

// In-place radix-2 transform; sign +1 gives sum_k e^{+2 pi i jk/N} x_k.
void fft(std::vector<Amplitude>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    double ang = sign * 2.0 * kPi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len)
      for (std::size_t k = 0; k < len / 2; ++k) {
        Amplitude w = std::polar(1.0, ang * static_cast<double>(k));
        Amplitude u = a[i + k], v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
  }
}

}  // namespace

void StateVector::dft(const std::vector<Qubit>& reg, bool inverse) {
  const std::size_t w = reg.size();
  const std::size_t dim = std::size_t{1} << w;
  std::uint64_t mask = 0;
  for (Qubit q : reg) mask |= std::uint64_t{1} << q;
  std::vector<std::uint64_t> offset(dim, 0);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t b = 0; b < w; ++b)
      if ((k >> b) & 1) offset[k] |= std::uint64_t{1} << reg[b];
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<Amplitude> buf(dim);
  for (std::uint64_t base = 0; base < amp_.size(); ++base) {
    if (base & mask) continue;
    for (std::size_t k = 0; k < dim; ++k) buf[k] = amp_[base | offset[k]];
    fft(buf, inverse ? -1 : 1);
    for (std::size_t k = 0; k < dim; ++k) amp_[base | offset[k]] = buf[k] * scale;
  }
}

void StateVector::apply(const Gate& g) {
  check(g);
  std::uint64_t cmask = 0, cval = 0;
  for (const auto& c : g.controls) {
    cmask |= std::uint64_t{1} << c.qubit;
    if (c.value) cval |= std::uint64_t{1} << c.qubit;
  }
  const std::uint64_t size = amp_.size();
  auto ok = [&](std::uint64_t i) { return (i & cmask) == cval; };
  switch (g.kind) {
    case GateKind::H: {
      const std::uint64_t b = std::uint64_t{1} << g.targets[0];
      const double s = 1.0 / std::sqrt(2.0);
      for (std::uint64_t i = 0; i < size; ++i) {
        if ((i & b) || !ok(i)) continue;
        Amplitude x = amp_[i], y = amp_[i | b];
        amp_[i] = (x + y) * s;
        amp_[i | b] = (x - y) * s;
      }
      break;
    }
    case GateKind::X: {
      const std::uint64_t b = std::uint64_t{1} << g.targets[0];
      for (std::uint64_t i = 0; i < size; ++i)
        if (!(i & b) && ok(i)) std::swap(amp_[i], amp_[i | b]);
      break;
    }
    case GateKind::Z:
    case GateKind::Phase: {
      const std::uint64_t b = std::uint64_t{1} << g.targets[0];
      const Amplitude f = g.kind == GateKind::Z ? Amplitude(-1.0, 0.0) : std::polar(1.0, g.theta);
      for (std::uint64_t i = 0; i < size; ++i)
        if ((i & b) && ok(i)) amp_[i] *= f;
      break;
    }
    case GateKind::Swap: {
      const std::uint64_t a = std::uint64_t{1} << g.targets[0], b = std::uint64_t{1} << g.targets[1];
      for (std::uint64_t i = 0; i < size; ++i)
        if ((i & a) && !(i & b) && ok(i)) std::swap(amp_[i], amp_[(i & ~a) | b]);
      break;
    }
    case GateKind::QFT:
    case GateKind::IQFT:
      if (!g.controls.empty()) throw PreconditionError("controlled QFT is not supported");
      dft(g.targets, g.kind == GateKind::IQFT);
      break;
    case GateKind::PhaseAdd: {
      const std::size_t w = g.targets.size();
      const std::uint64_t mod = std::uint64_t{1} << w;
      const std::uint64_t a = static_cast<std::uint64_t>(g.addend) & (mod - 1);
      std::vector<Amplitude> table(mod);
      for (std::uint64_t k = 0; k < mod; ++k)
        table[k] = std::polar(1.0, 2.0 * kPi * static_cast<double>((a * k) & (mod - 1)) / static_cast<double>(mod));
      for (std::uint64_t i = 0; i < size; ++i) {
        if (!ok(i)) continue;
        std::uint64_t k = 0;
        for (std::size_t b = 0; b < w; ++b) k |= ((i >> g.targets[b]) & 1) << b;
        amp_[i] *= table[k];
      }
      break;
    }
  }
}

double StateVector::probability_one(Qubit q) {
  if (q >= n_) throw PreconditionError("qubit out of range");
  double p = 0;
  for (std::uint64_t i = 0; i < amp_.size(); ++i)
    if ((i >> q) & 1) p += std::norm(amp_[i]);
  return p;
}

std::map<std::string, double> StateVector::distribution(const std::vector<Qubit>& qubits) {
  for (Qubit q : qubits)
    if (q >= n_) throw PreconditionError("qubit out of range");
  std::map<std::uint64_t, double> acc;
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    double p = std::norm(amp_[i]);
    if (p == 0) continue;
    std::uint64_t k = 0;
    for (std::size_t b = 0; b < qubits.size(); ++b) k |= ((i >> qubits[b]) & 1) << b;
    acc[k] += p;
  }
  std::map<std::string, double> out;
  for (const auto& [k, p] : acc) {
    std::vector<bool> bits(qubits.size());
    for (std::size_t b = 0; b < bits.size(); ++b) bits[b] = (k >> b) & 1;
    out[outcome_from_bits(bits).bitstring] = p;
  }
  return out;
}

MeasureOutcome StateVector::measure(const std::vector<Qubit>& qubits, std::mt19937_64& rng) {
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
  double keep = 0;
  for (std::uint64_t i = 0; i < amp_.size(); ++i) {
    bool match = true;
    for (std::size_t b = 0; b < qubits.size() && match; ++b) match = (((i >> qubits[b]) & 1) != 0) == bits[b];
    if (match) keep += std::norm(amp_[i]);
    else amp_[i] = 0;
  }
  const double s = 1.0 / std::sqrt(keep);
  for (auto& a : amp_) a *= s;
  return outcome_from_bits(bits);
}

double StateVector::norm() {
  double s = 0;
  for (const auto& a : amp_) s += std::norm(a);
  return s;
}

StateVector apply(StateVector s, const Gate& g) {
  s.apply(g);
  return s;
}

StateVector apply(StateVector s, const Circuit& c) {
  s.apply(c);
  return s;
}

StateVector qft(StateVector s, const std::vector<Qubit>& reg) {
  s.apply(make_qft(reg));
  return s;
}

std::pair<MeasureOutcome, StateVector> measure(StateVector s, const std::vector<Qubit>& reg, std::mt19937_64& rng) {
  MeasureOutcome o = s.measure(reg, rng);
  return {std::move(o), std::move(s)};
}

std::vector<std::vector<Amplitude>> circuit_matrix(const Circuit& c) {
  const std::size_t n = c.num_qubits();
  require(n <= 10, "circuit_matrix limited to 10 qubits");
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::vector<Amplitude>> m(dim, std::vector<Amplitude>(dim));
  StateVector s(n);
  for (std::size_t col = 0; col < dim; ++col) {
    std::fill(s.amplitudes().begin(), s.amplitudes().end(), Amplitude(0.0, 0.0));
    s.amplitudes()[col] = 1.0;
    s.apply(c);
    for (std::size_t row = 0; row < dim; ++row) m[row][col] = s[row];
  }
  return m;
}

}  // namespace qatp
