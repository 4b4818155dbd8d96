#include "bundleduel/convolution.hpp"

#include <algorithm>

#include "bundleduel/errors.hpp"

namespace bundleduel {

namespace {

void rebuild_nz(Pmf& p) {
  p.nz.clear();
  for (Tick t = 0; t < static_cast<Tick>(p.mass.size()); ++t) {
    if (p.mass[static_cast<size_t>(t)] > 0.0) p.nz.push_back(t);
  }
  while (!p.mass.empty() && p.mass.back() <= 0.0) p.mass.pop_back();
}

}  // namespace

Pmf pmf_point(Tick t) {
  if (t < 0) throw OffGridValue("point mass tick must be nonnegative");
  Pmf p;
  p.mass.assign(static_cast<size_t>(t) + 1, 0.0);
  p.mass[static_cast<size_t>(t)] = 1.0;
  p.nz.push_back(t);
  return p;
}

Pmf pmf_from_dense(std::vector<double> mass) {
  Pmf p;
  p.mass = std::move(mass);
  for (const double x : p.mass) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw ProbSumMismatch("pmf mass must be finite and >= 0");
  }
  rebuild_nz(p);
  return p;
}

Pmf min_value_law(const DiscreteDistribution& d, const MixedStrategy& s) {
  // Pr[min(v,q) = t] = Pr[v = t] Pr[q > t] + Pr[q = t] Pr[v > t] + Pr[v = t] Pr[q = t].
  // Computed as a merge over both supports with running tails.
  const auto& atoms = d.atoms();
  const Tick top = std::min(d.max_support_tick(),
                            s.ticks.empty() ? Tick{0} : s.ticks.back());
  Pmf out;
  out.mass.assign(static_cast<size_t>(top) + 1, 0.0);
  double v_tail = 1.0;  // Pr[v >= current merge point]
  double q_tail = 1.0;
  std::size_t ai = 0, qi = 0;
  while (ai < atoms.size() || qi < s.ticks.size()) {
    Tick t = kInfTicks;
    if (ai < atoms.size()) t = std::min(t, atoms[ai].tick);
    if (qi < s.ticks.size()) t = std::min(t, s.ticks[qi]);
    double pv = 0.0, pq = 0.0;
    if (ai < atoms.size() && atoms[ai].tick == t) pv = atoms[ai++].prob;
    if (qi < s.ticks.size() && s.ticks[qi] == t) pq = s.probs[qi++];
    const double mass = pv * (q_tail - pq) + pq * (v_tail - pv) + pv * pq;
    if (mass > 0.0) {
      if (t > top) break;  // beyond min of the supports: impossible
      out.mass[static_cast<size_t>(t)] += mass;
    }
    v_tail -= pv;
    q_tail -= pq;
  }
  rebuild_nz(out);
  return out;
}

Pmf min_value_law_pure(const DiscreteDistribution& d, Tick q) {
  MixedStrategy s;
  s.ticks.push_back(q);
  s.probs.push_back(1.0);
  return min_value_law(d, s);
}

Pmf convolve(const Pmf& a, const Pmf& b, Tick max_ticks_cap) {
  const Tick top = a.max_tick() + b.max_tick();
  if (top > max_ticks_cap) throw GridOverflow("convolution support exceeds the tick cap");
  Pmf out;
  out.mass.assign(static_cast<size_t>(top) + 1, 0.0);
  // Iterate the sparser factor outside for cache-friendly inner updates.
  const Pmf& outer = a.nz.size() <= b.nz.size() ? a : b;
  const Pmf& inner = a.nz.size() <= b.nz.size() ? b : a;
  for (const Tick ta : outer.nz) {
    const double pa = outer.mass[static_cast<size_t>(ta)];
    for (const Tick tb : inner.nz) {
      out.mass[static_cast<size_t>(ta + tb)] += pa * inner.mass[static_cast<size_t>(tb)];
    }
  }
  rebuild_nz(out);
  return out;
}

std::vector<Pmf> loo_convolutions(std::span<const Pmf> laws, Tick max_ticks_cap) {
  const std::size_t m = laws.size();
  if (m == 0) return {};
  if (m == 1) return {pmf_point(0)};
  // prefix[i] = conv(laws[0..i)), suffix[i] = conv(laws[i..m)).
  std::vector<Pmf> prefix(m), suffix(m);
  prefix[0] = pmf_point(0);
  for (std::size_t i = 1; i < m; ++i) prefix[i] = convolve(prefix[i - 1], laws[i - 1], max_ticks_cap);
  suffix[m - 1] = laws[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) suffix[i] = convolve(laws[i], suffix[i + 1], max_ticks_cap);
  std::vector<Pmf> out(m);
  out[0] = suffix[1];
  out[m - 1] = prefix[m - 1];
  for (std::size_t i = 1; i + 1 < m; ++i) out[i] = convolve(prefix[i], suffix[i + 1], max_ticks_cap);
  return out;
}

Pmf full_convolution(std::span<const Pmf> laws, Tick max_ticks_cap) {
  Pmf acc = pmf_point(0);
  for (const Pmf& law : laws) acc = convolve(acc, law, max_ticks_cap);
  return acc;
}

Cdf make_cdf(const Pmf& p) {
  Cdf c;
  c.cum.resize(p.mass.size());
  double run = 0.0;
  for (std::size_t t = 0; t < p.mass.size(); ++t) {
    run += p.mass[t];
    c.cum[t] = std::min(run, 1.0);
  }
  return c;
}

double pmf_mean(const Pmf& p) {
  double mu = 0.0;
  for (const Tick t : p.nz) mu += static_cast<double>(t) * p.mass[static_cast<size_t>(t)];
  return mu;
}

double pmf_variance(const Pmf& p) {
  const double mu = pmf_mean(p);
  double var = 0.0;
  for (const Tick t : p.nz) {
    const double d = static_cast<double>(t) - mu;
    var += d * d * p.mass[static_cast<size_t>(t)];
  }
  return var;
}

}  // namespace bundleduel
