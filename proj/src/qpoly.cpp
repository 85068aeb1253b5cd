// SPDX-License-Identifier: Apache-2.0
#include "qatp/qpoly.hpp"

#include <algorithm>
#include <set>

#include "qatp/errors.hpp"

namespace qatp {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw PreconditionError(msg);
}

void check_word(std::size_t w) {
  if (w < 2) throw PreconditionError("word width must be at least 2 bits");
  if (w > 62) throw CapacityError("word width above 62 bits");
}

std::vector<Qubit> bits_of(const Register& r) { return r.qubits(); }

void xor_const(Circuit& c, const Register& r, std::uint64_t v) {
  for (std::size_t b = 0; b < r.width; ++b)
    if ((v >> b) & 1) c.add(make_x(r[b]));
}

std::int64_t addend(const BigInt& k, std::size_t w) { return static_cast<std::int64_t>(wrap(k, w)); }

// out += sign * a * b, out already in Fourier mode. Operands are read as
// unsigned; for equal widths this is the product mod 2^w either way.
void mac(Circuit& c, const std::vector<Qubit>& a, const std::vector<Qubit>& b, const std::vector<Qubit>& out,
         int sign, const BigInt& scale = 1) {
  const std::size_t w = out.size();
  for (std::size_t i = 0; i < a.size() && i < w; ++i)
    for (std::size_t j = 0; j < b.size() && i + j < w; ++j) {
      std::vector<Control> cs{{a[i], true}};
      if (b[j] != a[i]) cs.push_back({b[j], true});
      const BigInt k = scale * sign * (BigInt(1) << (i + j));
      const std::int64_t v = addend(k, w);
      if (v) c.add(make_phase_add(out, v, cs));
    }
}

// out += k * a, out in Fourier mode.
void add_scaled(Circuit& c, const std::vector<Qubit>& a, const std::vector<Qubit>& out, const BigInt& k) {
  for (std::size_t i = 0; i < a.size() && i < out.size(); ++i) {
    const std::int64_t v = addend(k * (BigInt(1) << i), out.size());
    if (v) c.add(make_phase_add(out, v, {{a[i], true}}));
  }
}

// Appends `sub` with the listed registers bound to host registers; any other
// sub qubit gets a fresh host ancilla. Returns the fresh register.
Register invoke(Circuit& host, const Circuit& sub, const std::vector<std::pair<Register, Register>>& binds,
                const std::string& label, const std::string& tag, std::vector<Register>& ancillas) {
  constexpr Qubit unset = ~Qubit{0};
  std::vector<Qubit> map(sub.num_qubits(), unset);
  for (const auto& [s, h] : binds) {
    if (s.width != h.width)
      throw PreconditionError("register width mismatch binding " + s.name + " to " + h.name);
    for (std::size_t i = 0; i < s.width; ++i) map[s[i]] = h[i];
  }
  const std::size_t fresh = static_cast<std::size_t>(std::count(map.begin(), map.end(), unset));
  Register anc;
  if (fresh) {
    anc = host.add_register(tag + ".anc", fresh);
    ancillas.push_back(anc);
    std::size_t k = 0;
    for (auto& q : map)
      if (q == unset) q = anc[k++];
  }
  host.append(sub, map, {}, label);
  return anc;
}

Circuit inverse_prefix(const Circuit& c, std::size_t k, const std::map<std::string, std::uint64_t>& calls) {
  Circuit u(c.num_qubits());
  for (std::size_t i = k; i-- > 0;) u.add(c.gates()[i].inverse());
  for (const auto& [name, n] : calls) u.count_call(name, n);
  return u;
}

// Host input registers named after `spec.inputs`.
std::vector<Register> add_inputs(Circuit& c, const RegisterSpec& spec) {
  std::vector<Register> regs;
  for (const auto& name : spec.inputs) regs.push_back(c.add_register(name, spec.input_bits));
  return regs;
}

std::vector<std::pair<Register, Register>> bind_inputs(const PolyCircuit& sub, const std::vector<std::string>& names,
                                                       const std::vector<Register>& host) {
  std::vector<std::pair<Register, Register>> b;
  for (std::size_t i = 0; i < sub.spec.inputs.size(); ++i) {
    auto it = std::find(names.begin(), names.end(), sub.spec.inputs[i]);
    if (it == names.end()) throw PreconditionError("no host register for input " + sub.spec.inputs[i]);
    b.emplace_back(sub.inputs[i], host[static_cast<std::size_t>(it - names.begin())]);
  }
  return b;
}

std::vector<Rational> interpolate(const std::vector<Rational>& values) {
  // Vandermonde at 0..D, solved exactly.
  const std::size_t n = values.size();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t e = 0; e < n; ++e) {
    Rational p = 1;
    for (std::size_t k = 0; k < n; ++k) {
      a[e][k] = p;
      p *= static_cast<long>(e);
    }
    a[e][n] = values[e];
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (a[piv][col] == 0) ++piv;
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t k = col; k <= n; ++k) a[r][k] -= f * a[col][k];
    }
  }
  std::vector<Rational> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k][n] / a[k][k];
  return out;
}

BigInt inverse_mod_pow2(const BigInt& odd, std::size_t w) {
  // Newton iteration: x <- x (2 - a x), doubling correct bits each time.
  const BigInt m = BigInt(1) << w;
  BigInt a = ((odd % m) + m) % m, x = 1;
  for (std::size_t bits = 1; bits < w; bits *= 2) x = (x * (2 - a * x)) % m;
  return ((x % m) + m) % m;
}

CompositionNode node(std::string op, const Circuit& c, std::vector<CompositionNode> parts = {}) {
  return {std::move(op), c.depth(), c.num_qubits(), std::move(parts)};
}

}  // namespace

const Register& PolyCircuit::input(const std::string& name) const {
  for (std::size_t i = 0; i < spec.inputs.size(); ++i)
    if (spec.inputs[i] == name) return inputs[i];
  throw PreconditionError("no input register " + name);
}

std::string to_string(CoeffBasis b) { return b == CoeffBasis::Kravchuk ? "kravchuk" : "monomial"; }

// ---------------------------------------------------------------------------
// Classical helpers

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

BigInt kravchuk(std::int64_t d, std::int64_t y, std::int64_t D) {
  if (D < 0 || d < 0 || y < 0 || d > D || y > D) throw PreconditionError("kravchuk arguments out of range");
  BigInt s = 0;
  for (std::int64_t j = 0; j <= d; ++j) {
    BigInt t = binomial(y, j) * binomial(D - y, d - j);
    s += (j % 2) ? BigInt(-t) : t;
  }
  return s;
}

std::vector<BigInt> kravchuk_transform(const std::vector<BigInt>& values) {
  require(!values.empty(), "no values to transform");
  const auto D = static_cast<std::int64_t>(values.size()) - 1;
  std::vector<BigInt> c(values.size());
  for (std::int64_t d = 0; d <= D; ++d)
    for (std::int64_t e = 0; e <= D; ++e) c[d] += binomial(D, e) * kravchuk(d, e, D) * values[e];
  return c;
}

std::vector<Rational> kravchuk_reconstruct(const std::vector<BigInt>& coeffs) {
  require(!coeffs.empty(), "no coefficients to reconstruct from");
  const auto D = static_cast<std::int64_t>(coeffs.size()) - 1;
  std::vector<Rational> s(coeffs.size());
  for (std::int64_t y = 0; y <= D; ++y)
    for (std::int64_t d = 0; d <= D; ++d)
      s[y] += Rational(coeffs[d] * kravchuk(d, y, D), (BigInt(1) << D) * binomial(D, d));
  return s;
}

std::vector<std::vector<Rational>> kravchuk_to_monomial(std::int64_t D) {
  require(D >= 0, "negative degree");
  const std::size_t n = static_cast<std::size_t>(D) + 1;
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::int64_t d = 0; d <= D; ++d) {
    std::vector<Rational> vals(n);
    for (std::int64_t y = 0; y <= D; ++y) vals[y] = Rational(kravchuk(d, y, D));
    auto mono = interpolate(vals);
    const BigInt norm = (BigInt(1) << D) * binomial(D, d);
    for (std::size_t k = 0; k < n; ++k) m[k][d] = mono[k] / norm;
  }
  return m;
}

MonomialWeights monomial_weights(std::int64_t D) {
  const auto m = kravchuk_to_monomial(D);
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> w(n, std::vector<Rational>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t e = 0; e < n; ++e)
      for (std::size_t d = 0; d < n; ++d)
        w[k][e] += m[k][d] * Rational(binomial(D, static_cast<std::int64_t>(e)) *
                                      kravchuk(static_cast<std::int64_t>(d), static_cast<std::int64_t>(e), D));
  MonomialWeights mw;
  for (const auto& row : w)
    for (const auto& x : row) mw.denom = boost::multiprecision::lcm(mw.denom, boost::multiprecision::denominator(x));
  mw.numer.assign(n, std::vector<BigInt>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t e = 0; e < n; ++e) {
      const Rational s = w[k][e] * Rational(mw.denom);
      mw.numer[k][e] = boost::multiprecision::numerator(s);
    }
  return mw;
}

std::int64_t to_signed(std::uint64_t v, std::size_t w) {
  v &= (w >= 64) ? ~0ULL : ((1ULL << w) - 1);
  if (w < 64 && (v >> (w - 1)) & 1) return static_cast<std::int64_t>(v) - static_cast<std::int64_t>(1ULL << w);
  return static_cast<std::int64_t>(v);
}

std::uint64_t wrap(const BigInt& x, std::size_t w) {
  const BigInt m = BigInt(1) << w;
  BigInt r = x % m;
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

// ---------------------------------------------------------------------------
// Builders

PolyCircuit build_arith(const Polynomial& p, const RegisterSpec& spec) {
  check_word(spec.word_bits);
  require(spec.input_bits >= 1, "input registers need at least one qubit");
  std::vector<std::size_t> slot(p.vars().size(), ~std::size_t{0});
  for (std::size_t v : p.support()) {
    auto it = std::find(spec.inputs.begin(), spec.inputs.end(), p.vars()[v]);
    if (it == spec.inputs.end()) throw PreconditionError("no input register for variable " + p.vars()[v]);
    slot[v] = static_cast<std::size_t>(it - spec.inputs.begin());
  }

  PolyCircuit pc;
  pc.spec = spec;
  pc.inputs = add_inputs(pc.circuit, spec);
  pc.output = pc.circuit.add_register("value", spec.word_bits);
  const auto out = bits_of(pc.output);

  // Expand every monomial over the input bits; bits are idempotent.
  std::map<std::vector<Qubit>, BigInt> products;
  for (const auto& [e, c] : p.terms()) {
    std::map<std::vector<Qubit>, BigInt> acc{{{}, c}};
    for (std::size_t v = 0; v < e.size(); ++v)
      for (unsigned k = 0; k < e[v]; ++k) {
        std::map<std::vector<Qubit>, BigInt> next;
        const Register& r = pc.inputs[slot[v]];
        for (const auto& [set, coef] : acc)
          for (std::size_t b = 0; b < r.width; ++b) {
            std::vector<Qubit> s = set;
            if (!std::binary_search(s.begin(), s.end(), r[b])) s.insert(std::upper_bound(s.begin(), s.end(), r[b]), r[b]);
            next[s] += coef * (BigInt(1) << b);
          }
        acc = std::move(next);
      }
    for (auto& [set, coef] : acc) products[set] += coef;
  }

  pc.circuit.add(make_qft(out));
  for (const auto& [set, coef] : products) {
    const std::int64_t v = addend(coef, spec.word_bits);
    if (!v) continue;
    std::vector<Control> cs;
    for (Qubit q : set) cs.push_back({q, true});
    pc.circuit.add(make_phase_add(out, v, cs));
  }
  pc.circuit.add(make_iqft(out));
  pc.uncompute = Circuit(pc.circuit.num_qubits());
  pc.meta = node("arith", pc.circuit);
  return pc;
}

PolyCircuit build_datadriven(const std::vector<std::pair<std::uint64_t, BigInt>>& points, std::size_t index_bits,
                             std::size_t word_bits) {
  check_word(word_bits);
  require(!points.empty(), "no points to load");
  require(index_bits >= 1 && index_bits < 63, "index width out of range");
  std::set<std::uint64_t> seen;
  for (const auto& [i, v] : points) {
    if (i >> index_bits) throw CapacityError("index " + std::to_string(i) + " does not fit the index register");
    require(seen.insert(i).second, "duplicate index " + std::to_string(i));
  }
  PolyCircuit pc;
  pc.spec.word_bits = word_bits;
  pc.spec.input_bits = index_bits;
  pc.spec.inputs = {"index"};
  pc.inputs = add_inputs(pc.circuit, pc.spec);
  pc.output = pc.circuit.add_register("value", word_bits);
  const Register& idx = pc.inputs[0];
  for (const auto& [i, v] : points) {
    const std::uint64_t u = wrap(v, word_bits);
    std::vector<Control> cs;
    for (std::size_t b = 0; b < index_bits; ++b) cs.push_back({idx[b], ((i >> b) & 1) != 0});
    for (std::size_t b = 0; b < word_bits; ++b)
      if ((u >> b) & 1) pc.circuit.add(make_x(pc.output[b], cs));
  }
  pc.uncompute = Circuit(pc.circuit.num_qubits());
  pc.label = "U_D";
  pc.meta = node("data", pc.circuit);
  return pc;
}

CoeffCircuit build_coeff_circuit(const PolyCircuit& u_s, const std::string& y, std::size_t D, CoeffBasis basis) {
  const RegisterSpec& s = u_s.spec;
  require(std::find(s.inputs.begin(), s.inputs.end(), y) != s.inputs.end(), "evaluation circuit has no input " + y);
  if (D >> s.index_bits) throw CapacityError("degree bound does not fit the index register");
  if (D >> s.input_bits) throw CapacityError("degree bound does not fit the input register of " + y);
  const std::size_t W = s.word_bits;

  // Weight table wt[d][e] and the number of low output bits to drop.
  std::vector<std::vector<BigInt>> wt(D + 1, std::vector<BigInt>(D + 1));
  std::size_t drop = 0;
  const auto Di = static_cast<std::int64_t>(D);
  if (basis == CoeffBasis::Kravchuk) {
    for (std::int64_t d = 0; d <= Di; ++d)
      for (std::int64_t e = 0; e <= Di; ++e) wt[d][e] = binomial(Di, e) * kravchuk(d, e, Di);
  } else {
    MonomialWeights mw = monomial_weights(Di);
    BigInt odd = mw.denom;
    while ((odd & 1) == 0) {
      odd >>= 1;
      ++drop;
    }
    if (drop + 2 > W) throw CapacityError("word too narrow for the coefficient denominator");
    const BigInt inv = inverse_mod_pow2(odd, W);
    for (std::size_t d = 0; d <= D; ++d)
      for (std::size_t e = 0; e <= D; ++e) wt[d][e] = mw.numer[d][e] * inv;
  }

  CoeffCircuit cc;
  cc.spec = s;
  cc.spec.inputs.erase(std::find(cc.spec.inputs.begin(), cc.spec.inputs.end(), y));
  cc.spec.word_bits = W - drop;
  cc.var = y;
  cc.degree_bound = D;
  cc.basis = basis;
  cc.label = "U_Sy";
  Circuit& c = cc.circuit;
  cc.index = c.add_register("d", s.index_bits);
  cc.inputs = add_inputs(c, cc.spec);
  Register out = c.add_register("coeff", W);
  Register yreg = c.add_register(y, s.input_bits);
  cc.ancillas.push_back(yreg);
  std::vector<Register> vals;
  for (std::size_t e = 0; e <= D; ++e) {
    vals.push_back(c.add_register("S(" + std::to_string(e) + ")", W));
    cc.ancillas.push_back(vals.back());
  }
  Register wreg = c.add_register("weight", W);
  cc.ancillas.push_back(wreg);

  // Point evaluations, y set by X layers.
  std::vector<std::string> host_names = s.inputs;
  std::vector<Register> host_regs;
  for (const auto& name : s.inputs) host_regs.push_back(name == y ? yreg : cc.input(name));
  std::uint64_t prev = 0;
  for (std::size_t e = 0; e <= D; ++e) {
    xor_const(c, yreg, prev ^ e);
    prev = e;
    auto binds = bind_inputs(u_s, host_names, host_regs);
    binds.emplace_back(u_s.output, vals[e]);
    invoke(c, u_s.circuit, binds, u_s.label, "S(" + std::to_string(e) + ")", cc.ancillas);
  }
  xor_const(c, yreg, prev);
  const std::size_t pre_end = c.gates().size();
  const auto pre_calls = c.calls();

  // Weighted sum; the weight register is loaded and unloaded per point.
  c.add(make_qft(bits_of(out)));
  for (std::size_t e = 0; e <= D; ++e) {
    std::vector<std::pair<std::uint64_t, BigInt>> pts;
    for (std::size_t d = 0; d <= D; ++d)
      if (wrap(wt[d][e], W)) pts.emplace_back(d, wt[d][e]);
    if (pts.empty()) continue;
    PolyCircuit load = build_datadriven(pts, s.index_bits, W);
    std::vector<Register> scratch;
    invoke(c, load.circuit, {{load.inputs[0], cc.index}, {load.output, wreg}}, "", "w", scratch);
    mac(c, bits_of(wreg), bits_of(vals[e]), bits_of(out), 1);
    invoke(c, load.circuit, {{load.inputs[0], cc.index}, {load.output, wreg}}, "", "w", scratch);
  }
  c.add(make_iqft(bits_of(out)));

  cc.output = Register{"coeff", out.start + drop, W - drop};
  if (drop) cc.ancillas.push_back(Register{"coeff.low", out.start, drop});
  cc.uncompute = inverse_prefix(c, pre_end, pre_calls);
  cc.meta = node("coeff[" + to_string(basis) + "]", c, {u_s.meta});
  return cc;
}

CoeffCircuit build_poly_coeff_circuit(const Polynomial& p, const std::string& y, std::size_t D, RegisterSpec spec) {
  BigInt denom = monomial_weights(static_cast<std::int64_t>(D)).denom;
  while ((denom & 1) == 0) {
    denom >>= 1;
    ++spec.word_bits;
  }
  PolyCircuit u = build_arith(p, spec);
  u.label = "U_S";
  return build_coeff_circuit(u, y, D, CoeffBasis::Monomial);
}

Circuit u_add(std::size_t w) {
  check_word(w);
  Circuit c;
  Register a = c.add_register("a", w), b = c.add_register("b", w), out = c.add_register("out", w);
  c.add(make_qft(bits_of(out)));
  add_scaled(c, bits_of(a), bits_of(out), 1);
  add_scaled(c, bits_of(b), bits_of(out), 1);
  c.add(make_iqft(bits_of(out)));
  return c;
}

Circuit u_sub(std::size_t w) {
  check_word(w);
  Circuit c;
  Register a = c.add_register("a", w), b = c.add_register("b", w), out = c.add_register("out", w);
  c.add(make_qft(bits_of(out)));
  add_scaled(c, bits_of(a), bits_of(out), 1);
  add_scaled(c, bits_of(b), bits_of(out), -1);
  c.add(make_iqft(bits_of(out)));
  return c;
}

Circuit u_mul(std::size_t w) {
  check_word(w);
  Circuit c;
  Register a = c.add_register("a", w), b = c.add_register("b", w), out = c.add_register("out", w);
  c.add(make_qft(bits_of(out)));
  mac(c, bits_of(a), bits_of(b), bits_of(out), 1);
  c.add(make_iqft(bits_of(out)));
  return c;
}

namespace {

void check_compatible(const PolyCircuit& a, const PolyCircuit& b) {
  if (a.spec.word_bits != b.spec.word_bits) throw PreconditionError("circuits have different output widths");
  for (std::size_t i = 0; i < a.spec.inputs.size(); ++i)
    for (std::size_t j = 0; j < b.spec.inputs.size(); ++j)
      if (a.spec.inputs[i] == b.spec.inputs[j] && a.inputs[i].width != b.inputs[j].width)
        throw PreconditionError("input " + a.spec.inputs[i] + " has different widths");
}

// Union of input names, first-seen order, with widths.
std::pair<std::vector<std::string>, std::vector<std::size_t>> merged_inputs(const PolyCircuit& a, const PolyCircuit& b) {
  std::vector<std::string> names;
  std::vector<std::size_t> widths;
  for (const PolyCircuit* p : {&a, &b})
    for (std::size_t i = 0; i < p->spec.inputs.size(); ++i)
      if (std::find(names.begin(), names.end(), p->spec.inputs[i]) == names.end()) {
        names.push_back(p->spec.inputs[i]);
        widths.push_back(p->inputs[i].width);
      }
  return {names, widths};
}

}  // namespace

CoeffCircuit build_remainder_circuit(const CoeffCircuit& u_sy, const CoeffCircuit& u_ty, std::size_t Ds,
                                     std::size_t Dt) {
  require(u_sy.basis == CoeffBasis::Monomial && u_ty.basis == CoeffBasis::Monomial,
          "remainder circuit needs monomial-basis coefficients");
  require(u_sy.var == u_ty.var, "coefficient circuits are in different variables");
  require(Dt >= 1 && Ds >= Dt, "remainder circuit needs Ds >= Dt >= 1");
  require(Ds <= u_sy.degree_bound && Dt <= u_ty.degree_bound, "degree exceeds the coefficient circuit's bound");
  require(u_sy.index.width == u_ty.index.width, "index registers differ in width");
  check_compatible(u_sy, u_ty);
  const std::size_t b = u_sy.index.width, w = u_sy.spec.word_bits;
  if ((Ds + Dt) >> b) throw CapacityError("index register too narrow for the shifted coefficient index");

  CoeffCircuit rc;
  auto [names, widths] = merged_inputs(u_sy, u_ty);
  rc.spec = u_sy.spec;
  rc.spec.word_bits = w;
  rc.spec.inputs = names;
  rc.var = u_sy.var;
  rc.basis = CoeffBasis::Monomial;
  rc.degree_bound = Ds;  // index Ds is addressable and always 0
  rc.label = "U_Ry";
  Circuit& c = rc.circuit;
  rc.index = c.add_register("d", b);
  for (std::size_t i = 0; i < names.size(); ++i) rc.inputs.push_back(c.add_register(names[i], widths[i]));
  Register out = c.add_register("coeff", w);
  auto anc = [&](const std::string& n, std::size_t width) {
    rc.ancillas.push_back(c.add_register(n, width));
    return rc.ancillas.back();
  };
  Register k_s = anc("Ds", b), k_t = anc("Dt", b), shifted = anc("d+Dt-Ds", b);
  Register sd = anc("s(d)", w), sD = anc("s(Ds)", w), tD = anc("t(Dt)", w), te = anc("t(d+Dt-Ds)", w);
  Register m1 = anc("m1", w), m2 = anc("m2", w);

  xor_const(c, k_s, Ds);
  xor_const(c, k_t, Dt);
  for (std::size_t i = 0; i < b; ++i) c.add(make_x(shifted[i], {{rc.index[i], true}}));
  c.add(make_qft(bits_of(shifted)));
  c.add(make_phase_add(bits_of(shifted), static_cast<std::int64_t>(Dt) - static_cast<std::int64_t>(Ds)));
  c.add(make_iqft(bits_of(shifted)));

  auto call = [&](const CoeffCircuit& sub, const Register& idx, const Register& dst, const std::string& tag) {
    auto binds = bind_inputs(sub, names, rc.inputs);
    binds.emplace_back(sub.index, idx);
    binds.emplace_back(sub.output, dst);
    invoke(c, sub.circuit, binds, sub.label, tag, rc.ancillas);
  };
  call(u_sy, rc.index, sd, "s(d)");
  call(u_sy, k_s, sD, "s(Ds)");
  call(u_ty, k_t, tD, "t(Dt)");
  call(u_ty, shifted, te, "t(d+Dt-Ds)");
  const Circuit mul = u_mul(w);
  auto mreg = [&](const std::string& n) { return mul.reg(n); };
  std::vector<Register> none;
  invoke(c, mul, {{mreg("a"), sd}, {mreg("b"), tD}, {mreg("out"), m1}}, "u_mul", "m1", none);
  invoke(c, mul, {{mreg("a"), te}, {mreg("b"), sD}, {mreg("out"), m2}}, "u_mul", "m2", none);
  const std::size_t pre_end = c.gates().size();
  const auto pre_calls = c.calls();

  const Circuit sub = u_sub(w);
  invoke(c, sub, {{sub.reg("a"), m1}, {sub.reg("b"), m2}, {sub.reg("out"), out}}, "u_sub", "r", none);

  rc.output = out;
  rc.uncompute = inverse_prefix(c, pre_end, pre_calls);
  CompositionNode arith_node{"arith", 2 * mul.depth() + sub.depth(), 3 * w, {}};
  rc.meta = node("remainder", c, {u_sy.meta, u_ty.meta, arith_node});
  return rc;
}

PolyCircuit build_eval_from_coeffs(const CoeffCircuit& cc, std::size_t degree) {
  const std::size_t w = cc.spec.word_bits, D = std::min(degree, cc.degree_bound);
  PolyCircuit pc;
  pc.spec = cc.spec;
  pc.spec.inputs.push_back(cc.var);
  pc.label = "U_F";
  Circuit& c = pc.circuit;
  for (std::size_t i = 0; i < cc.spec.inputs.size(); ++i)
    pc.inputs.push_back(c.add_register(cc.spec.inputs[i], cc.inputs[i].width));
  pc.inputs.push_back(c.add_register(cc.var, cc.spec.input_bits));
  const Register& y = pc.inputs.back();
  if (y.width > w) throw PreconditionError("input wider than the word");
  pc.output = c.add_register("value", w);
  auto anc = [&](const std::string& n, std::size_t width) {
    pc.ancillas.push_back(c.add_register(n, width));
    return pc.ancillas.back();
  };
  Register k = anc("k", cc.index.width);
  std::vector<Register> coef, pw;
  for (std::size_t d = 0; d <= D; ++d) coef.push_back(anc("c" + std::to_string(d), w));
  for (std::size_t d = 0; d <= D; ++d) pw.push_back(anc(cc.var + "^" + std::to_string(d), w));

  std::uint64_t prev = 0;
  for (std::size_t d = 0; d <= D; ++d) {
    xor_const(c, k, prev ^ d);
    prev = d;
    auto binds = bind_inputs(cc, pc.spec.inputs, pc.inputs);
    binds.emplace_back(cc.index, k);
    binds.emplace_back(cc.output, coef[d]);
    invoke(c, cc.circuit, binds, cc.label, "c" + std::to_string(d), pc.ancillas);
  }
  xor_const(c, k, prev);
  c.add(make_x(pw[0][0]));
  if (D >= 1)
    for (std::size_t i = 0; i < y.width; ++i) c.add(make_x(pw[1][i], {{y[i], true}}));
  // y^d = y^(d-1) * y; the squaring shares qubits, so no u_mul binding here.
  for (std::size_t d = 2; d <= D; ++d) {
    c.add(make_qft(bits_of(pw[d])));
    mac(c, bits_of(pw[d - 1]), bits_of(pw[1]), bits_of(pw[d]), 1);
    c.add(make_iqft(bits_of(pw[d])));
  }
  const std::size_t pre_end = c.gates().size();
  const auto pre_calls = c.calls();

  c.add(make_qft(bits_of(pc.output)));
  for (std::size_t d = 0; d <= D; ++d) mac(c, bits_of(coef[d]), bits_of(pw[d]), bits_of(pc.output), 1);
  c.add(make_iqft(bits_of(pc.output)));
  pc.uncompute = inverse_prefix(c, pre_end, pre_calls);
  pc.meta = node("eval", c, {cc.meta});
  return pc;
}

PolyCircuit build_difference(const PolyCircuit& a, const PolyCircuit& b) {
  check_compatible(a, b);
  const std::size_t w = a.spec.word_bits;
  auto [names, widths] = merged_inputs(a, b);
  PolyCircuit pc;
  pc.spec = a.spec;
  pc.spec.inputs = names;
  pc.label = "U_F";
  Circuit& c = pc.circuit;
  for (std::size_t i = 0; i < names.size(); ++i) pc.inputs.push_back(c.add_register(names[i], widths[i]));
  pc.output = c.add_register("value", w);
  pc.ancillas.push_back(c.add_register("a", w));
  pc.ancillas.push_back(c.add_register("b", w));
  const Register ra = pc.ancillas[0], rb = pc.ancillas[1];
  for (const auto& [sub, dst, tag] : {std::tuple{&a, ra, "a"}, std::tuple{&b, rb, "b"}}) {
    auto binds = bind_inputs(*sub, names, pc.inputs);
    binds.emplace_back(sub->output, dst);
    invoke(c, sub->circuit, binds, sub->label, tag, pc.ancillas);
  }
  const std::size_t pre_end = c.gates().size();
  const auto pre_calls = c.calls();
  const Circuit s = u_sub(w);
  std::vector<Register> none;
  invoke(c, s, {{s.reg("a"), ra}, {s.reg("b"), rb}, {s.reg("out"), pc.output}}, "u_sub", "diff", none);
  pc.uncompute = inverse_prefix(c, pre_end, pre_calls);
  pc.meta = node("difference", c, {a.meta, b.meta});
  return pc;
}

PolyCircuit reset_ancillas(PolyCircuit c) {
  if (!c.uncompute.gates().empty()) c.circuit.append(c.uncompute);
  c.uncompute = Circuit(c.circuit.num_qubits());
  return c;
}

CoeffCircuit reset_ancillas(CoeffCircuit c) {
  if (!c.uncompute.gates().empty()) c.circuit.append(c.uncompute);
  c.uncompute = Circuit(c.circuit.num_qubits());
  return c;
}

// ---------------------------------------------------------------------------
// Simulation

std::vector<bool> run_basis(const Circuit& c, const std::vector<bool>& input) {
  SparseState s(c.num_qubits());
  s.set_basis(input);
  s.apply(c);
  std::vector<Qubit> all(c.num_qubits());
  for (std::size_t q = 0; q < all.size(); ++q) all[q] = q;
  auto dist = s.distribution(all);
  if (dist.size() != 1 || dist.begin()->second < 1 - 1e-9)
    throw std::logic_error("circuit did not map a basis state to a basis state");
  const std::string& key = dist.begin()->first;
  std::vector<bool> bits(all.size());
  for (std::size_t q = 0; q < bits.size(); ++q) bits[q] = key[key.size() - 1 - q] == '1';
  return bits;
}

namespace {

void load(std::vector<bool>& bits, const Register& r, std::uint64_t v) {
  if (r.width < 64 && (v >> r.width)) throw PreconditionError("value does not fit register " + r.name);
  for (std::size_t b = 0; b < r.width; ++b) bits[r[b]] = (v >> b) & 1;
}

std::uint64_t read(const std::vector<bool>& bits, const Register& r) {
  std::uint64_t v = 0;
  for (std::size_t b = 0; b < r.width && b < 64; ++b)
    if (bits[r[b]]) v |= 1ULL << b;
  return v;
}

std::vector<bool> prepare(const PolyCircuit& pc, const std::map<std::string, std::uint64_t>& inputs) {
  std::vector<bool> bits(pc.circuit.num_qubits(), false);
  for (const auto& [name, v] : inputs) load(bits, pc.input(name), v);
  return bits;
}

}  // namespace

std::uint64_t evaluate_circuit(const PolyCircuit& pc, const std::map<std::string, std::uint64_t>& inputs) {
  return read(run_basis(pc.circuit, prepare(pc, inputs)), pc.output);
}

std::uint64_t evaluate_circuit(const CoeffCircuit& cc, std::uint64_t d,
                               const std::map<std::string, std::uint64_t>& inputs) {
  if (d > cc.degree_bound) throw PreconditionError("coefficient index past the degree bound");
  auto bits = prepare(cc, inputs);
  load(bits, cc.index, d);
  return read(run_basis(cc.circuit, bits), cc.output);
}

}  // namespace qatp
