#include "bundleduel/equilibrium.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <string>

#include "bundleduel/errors.hpp"
#include "bundleduel/rng.hpp"

namespace bundleduel {

const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::PureBruteForce: return "pure_brute_force";
    case SolveMethod::IteratedBR: return "iterated_best_response";
    case SolveMethod::FictitiousPlay: return "fictitious_play";
    case SolveMethod::Verified: return "verified";
  }
  return "unknown";
}

namespace {

std::vector<std::vector<Tick>> resolve_grids(const MarketInstance& inst,
                                             const std::vector<std::vector<Tick>>& given) {
  if (!given.empty()) {
    if (static_cast<int>(given.size()) != inst.item_count()) {
      throw OffGridValue("grid override needs one price list per seller");
    }
    for (const auto& g : given) {
      if (g.empty() || !std::is_sorted(g.begin(), g.end()) || g.front() < 0) {
        throw OffGridValue("price lists must be nonempty, ascending, nonnegative");
      }
    }
    return given;
  }
  std::vector<std::vector<Tick>> grids;
  for (int i = 0; i < inst.item_count(); ++i) grids.push_back(price_grid_points(inst, i));
  return grids;
}

std::uint64_t saturating_product(const std::vector<std::vector<Tick>>& grids) {
  std::uint64_t prod = 1;
  for (const auto& g : grids) {
    const std::uint64_t n = g.size();
    if (prod > (std::uint64_t{1} << 62) / n) return std::uint64_t{1} << 63;
    prod *= n;
  }
  return prod;
}

std::string profile_key(const StrategyProfile& profile) {
  std::string key;
  char buf[64];
  for (const auto& s : profile) {
    for (std::size_t k = 0; k < s.ticks.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%lld:%.12g;", static_cast<long long>(s.ticks[k]),
                    s.probs[k]);
      key += buf;
    }
    key += '|';
  }
  return key;
}

// ---------------------------------------------------------------------------
// Factor engine: expected utilities under GrandBundle/Partition menus at any
// item count, via capped prefix/suffix convolutions of min(v_j, q_j) laws.
// ---------------------------------------------------------------------------

// Convolution that drops mass above `cap`. Partial sums above the block
// price can only grow, so the dropped mass never feeds Pr[S <= x] queries
// with x <= cap; those stay exact.
Pmf convolve_dropping(const Pmf& a, const Pmf& b, Tick cap) {
  const Tick size = std::min(a.max_tick() + b.max_tick(), cap) + 1;
  Pmf out;
  out.mass.assign(static_cast<std::size_t>(size), 0.0);
  for (const Tick ta : a.nz) {
    if (ta > cap) break;
    const double pa = a.mass[static_cast<std::size_t>(ta)];
    for (const Tick tb : b.nz) {
      if (ta + tb > cap) break;
      out.mass[static_cast<std::size_t>(ta + tb)] += pa * b.mass[static_cast<std::size_t>(tb)];
    }
  }
  out.nz.clear();
  for (Tick t = 0; t < static_cast<Tick>(out.mass.size()); ++t) {
    if (out.mass[static_cast<std::size_t>(t)] > 0.0) out.nz.push_back(t);
  }
  return out;
}

struct BlockEval {
  std::vector<std::vector<double>> util;  // aligned with block.items and queries
  double sale_prob = 0.0;
};

// Utilities of every block member at its query prices, given the members'
// min-value laws: u_k(a) = Rev_k(a) * Pr[sum_{j != k} X_j <= price - a].
// Members with many queries are processed first so that their leave-one-out
// prefixes stay sparse (the per-query loop walks the prefix support).
BlockEval eval_block(const MarketInstance& inst, const std::vector<Pmf>& laws,
                     const FactorBlock& block, const std::vector<std::vector<Tick>>& queries) {
  const std::size_t n = block.items.size();
  BlockEval out;
  out.util.resize(n);
  if (block.price == kInfTicks) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto& d = inst.items[static_cast<std::size_t>(block.items[k])];
      for (const Tick a : queries[k]) out.util[k].push_back(revenue_at(d, inst.grid.value(a)));
    }
    return out;
  }
  if (block.price > kDefaultConvCap) {
    throw GridOverflow("block price beyond the convolution range");
  }

  const Tick cap = block.price;
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return queries[a].size() > queries[b].size();
  });
  const auto law_at = [&](std::size_t pos) -> const Pmf& {
    return laws[static_cast<std::size_t>(block.items[order[pos]])];
  };

  std::vector<Pmf> prefix(n + 1);
  prefix[0] = pmf_point(0);
  for (std::size_t k = 0; k < n; ++k) {
    prefix[k + 1] = convolve_dropping(prefix[k], law_at(k), cap);
  }
  std::vector<Cdf> suffix_cdf(n + 1);
  Pmf suffix = pmf_point(0);
  suffix_cdf[n] = make_cdf(suffix);
  for (std::size_t k = n; k-- > 0;) {
    suffix = convolve_dropping(suffix, law_at(k), cap);
    suffix_cdf[k] = make_cdf(suffix);
  }

  double mass_at_most_p = 0.0;
  for (const Tick t : prefix[n].nz) mass_at_most_p += prefix[n].mass[static_cast<std::size_t>(t)];
  out.sale_prob = std::max(0.0, 1.0 - mass_at_most_p);

  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t k = order[pos];
    const auto& d = inst.items[static_cast<std::size_t>(block.items[k])];
    const Pmf& pre = prefix[pos];
    const Cdf& suf = suffix_cdf[pos + 1];
    out.util[k].reserve(queries[k].size());
    for (const Tick a : queries[k]) {
      const Tick x = block.price - a;  // rivals' headroom
      if (x < 0) {
        out.util[k].push_back(0.0);
        continue;
      }
      double at_most = 0.0;
      for (const Tick t : pre.nz) {
        if (t > x) break;
        at_most += pre.mass[static_cast<std::size_t>(t)] * suf.at_most(x - t);
      }
      out.util[k].push_back(revenue_at(d, inst.grid.value(a)) * at_most);
    }
  }
  return out;
}

struct FactorUtilities {
  std::vector<std::vector<double>> util;  // [seller][query index]
  Money principal = 0.0;
};

std::vector<Pmf> profile_min_laws(const MarketInstance& inst, const StrategyProfile& profile) {
  std::vector<Pmf> laws;
  laws.reserve(profile.size());
  for (int i = 0; i < inst.item_count(); ++i) {
    laws.push_back(min_value_law(inst.items[static_cast<std::size_t>(i)],
                                 profile[static_cast<std::size_t>(i)]));
  }
  return laws;
}

FactorUtilities factor_utilities(const MarketInstance& inst, const Menu& menu,
                                 const std::vector<Pmf>& laws,
                                 const std::vector<std::vector<Tick>>& queries) {
  const int m = inst.item_count();
  FactorUtilities out;
  out.util.resize(static_cast<std::size_t>(m));
  std::vector<bool> covered(static_cast<std::size_t>(m), false);
  for (const auto& block : menu_blocks(menu)) {
    std::vector<std::vector<Tick>> block_queries;
    for (const int j : block.items) {
      covered[static_cast<std::size_t>(j)] = true;
      block_queries.push_back(queries[static_cast<std::size_t>(j)]);
    }
    BlockEval ev = eval_block(inst, laws, block, block_queries);
    for (std::size_t k = 0; k < block.items.size(); ++k) {
      out.util[static_cast<std::size_t>(block.items[k])] = std::move(ev.util[k]);
    }
    if (block.price != kInfTicks) out.principal += inst.grid.value(block.price) * ev.sale_prob;
  }
  for (int i = 0; i < m; ++i) {
    if (covered[static_cast<std::size_t>(i)]) continue;
    const auto& d = inst.items[static_cast<std::size_t>(i)];
    for (const Tick a : queries[static_cast<std::size_t>(i)]) {
      out.util[static_cast<std::size_t>(i)].push_back(revenue_at(d, inst.grid.value(a)));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tensor engine: exact per-seller payoff tables over full grid products for
// m <= 3, covering every menu kind (Explicit included).
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kMaxTensorCells = std::uint64_t{1} << 23;

struct Tensors {
  int m = 0;
  std::vector<std::vector<Tick>> grids;
  std::vector<std::uint64_t> nflat;                 // per seller
  std::vector<std::array<std::uint64_t, 4>> stride;  // stride[i][j], j != i
  std::vector<std::vector<double>> rows;             // [i][a * nflat[i] + flat]

  double cell(int i, std::size_t a, std::uint64_t flat) const {
    return rows[static_cast<std::size_t>(i)]
               [static_cast<std::size_t>(a * nflat[static_cast<std::size_t>(i)] + flat)];
  }
  std::uint64_t flat_of(int i, const std::vector<std::size_t>& idx) const {
    std::uint64_t f = 0;
    for (int j = 0; j < m; ++j) {
      if (j != i) f += idx[static_cast<std::size_t>(j)] * stride[static_cast<std::size_t>(i)]
                                                                [static_cast<std::size_t>(j)];
    }
    return f;
  }
};

bool tensors_feasible(const MarketInstance& inst, const std::vector<std::vector<Tick>>& grids,
                      std::uint64_t max_cells = kMaxTensorCells) {
  if (inst.item_count() > 3) return false;
  std::uint64_t cells = 0;
  for (int i = 0; i < inst.item_count(); ++i) {
    std::uint64_t f = 1;
    for (int j = 0; j < inst.item_count(); ++j) {
      if (j != i) f *= grids[static_cast<std::size_t>(j)].size();
    }
    if (f > max_cells) return false;
    cells += f * grids[static_cast<std::size_t>(i)].size();
    if (cells > max_cells) return false;
  }
  return true;
}

// Seller i's sale indicator at a realized configuration: monotone
// non-increasing in i's own price.
bool sale_indicator(const Menu& menu, std::vector<Tick>& q, const std::vector<Tick>& v, int i,
                    Tick qi, const ValueGrid& grid) {
  q[static_cast<std::size_t>(i)] = qi;
  const Outcome o = buyer_choice(menu, q, v, grid);
  return (o.seller_set >> i) & 1u;
}

Tensors build_tensors(const MarketInstance& inst, const Menu& menu,
                      const std::vector<std::vector<Tick>>& grids) {
  const int m = inst.item_count();
  Tensors t;
  t.m = m;
  t.grids = grids;
  t.nflat.resize(static_cast<std::size_t>(m));
  t.stride.assign(static_cast<std::size_t>(m), {0, 0, 0, 0});
  t.rows.resize(static_cast<std::size_t>(m));

  const bool factorable = menu.kind() != MenuKind::Explicit;
  for (int i = 0; i < m; ++i) {
    std::uint64_t f = 1;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      t.stride[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = f;
      f *= grids[static_cast<std::size_t>(j)].size();
    }
    t.nflat[static_cast<std::size_t>(i)] = f;
    const std::size_t na = grids[static_cast<std::size_t>(i)].size();
    t.rows[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(f) * na, 0.0);
  }

  for (int i = 0; i < m; ++i) {
    const auto& gi = grids[static_cast<std::size_t>(i)];
    const auto& d = inst.items[static_cast<std::size_t>(i)];
    std::vector<double> rev(gi.size());
    for (std::size_t a = 0; a < gi.size(); ++a) rev[a] = revenue_at(d, inst.grid.value(gi[a]));

    std::vector<int> opp;
    for (int j = 0; j < m; ++j) {
      if (j != i) opp.push_back(j);
    }
    auto& rows = t.rows[static_cast<std::size_t>(i)];
    const std::uint64_t nf = t.nflat[static_cast<std::size_t>(i)];

    if (factorable) {
      const Tick price = factor_block_price(menu, i);
      std::vector<int> mates;
      if (price != kInfTicks) {
        const ItemMask blk = factor_block_of(menu, i);
        for (const int j : opp) {
          if ((blk >> j) & 1u) mates.push_back(j);
        }
      }
      std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
      std::vector<Tick> mate_ticks(mates.size(), -1);
      Cdf cdf;
      for (std::uint64_t flat = 0; flat < nf; ++flat) {
        bool stale = false;
        for (std::size_t k = 0; k < mates.size(); ++k) {
          const Tick q = grids[static_cast<std::size_t>(mates[k])]
                              [idx[static_cast<std::size_t>(mates[k])]];
          if (q != mate_ticks[k]) {
            mate_ticks[k] = q;
            stale = true;
          }
        }
        if (stale || flat == 0) {
          Pmf rivals = pmf_point(0);
          for (std::size_t k = 0; k < mates.size(); ++k) {
            rivals = convolve(
                rivals, min_value_law_pure(inst.items[static_cast<std::size_t>(mates[k])],
                                           mate_ticks[k]));
          }
          cdf = make_cdf(rivals);
        }
        for (std::size_t a = 0; a < gi.size(); ++a) {
          double u = 0.0;
          if (price == kInfTicks) {
            u = rev[a];
          } else if (gi[a] <= price) {
            u = rev[a] * cdf.at_most(price - gi[a]);
          }
          rows[static_cast<std::size_t>(a * nf + flat)] = u;
        }
        // advance odometer (first opponent fastest, matching the strides)
        for (const int j : opp) {
          auto& ij = idx[static_cast<std::size_t>(j)];
          if (++ij < grids[static_cast<std::size_t>(j)].size()) break;
          ij = 0;
        }
      }
    } else {
      // Explicit menu: tau threshold per (q_{-i}, v_{-i}) through the buyer
      // oracle; u_i(a) = Rev_i(a) * Pr[tau >= a].
      struct Combo {
        std::vector<Tick> v;
        double w;
      };
      std::vector<Combo> combos;
      {
        std::vector<std::size_t> ai(static_cast<std::size_t>(m), 0);
        for (;;) {
          Combo c;
          c.v.assign(static_cast<std::size_t>(m), 0);
          c.w = 1.0;
          for (int j = 0; j < m; ++j) {
            const auto& atoms = inst.items[static_cast<std::size_t>(j)].atoms();
            if (j == i) {
              c.v[static_cast<std::size_t>(j)] = inst.items[static_cast<std::size_t>(j)]
                                                     .max_support_tick();
            } else {
              c.v[static_cast<std::size_t>(j)] = atoms[ai[static_cast<std::size_t>(j)]].tick;
              c.w *= atoms[ai[static_cast<std::size_t>(j)]].prob;
            }
          }
          combos.push_back(std::move(c));
          int j = 0;
          for (; j < m; ++j) {
            if (j == i) continue;
            auto& aj = ai[static_cast<std::size_t>(j)];
            if (++aj < inst.items[static_cast<std::size_t>(j)].atoms().size()) break;
            aj = 0;
          }
          if (j == m) break;
        }
      }

      std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
      std::vector<Tick> q(static_cast<std::size_t>(m), 0);
      std::vector<double> tail(gi.size() + 1, 0.0);
      for (std::uint64_t flat = 0; flat < nf; ++flat) {
        for (const int j : opp) {
          q[static_cast<std::size_t>(j)] = grids[static_cast<std::size_t>(j)]
                                                [idx[static_cast<std::size_t>(j)]];
        }
        std::fill(tail.begin(), tail.end(), 0.0);
        for (const auto& c : combos) {
          // ind is 1 at index 0 (a zero price always sells) and monotone
          // non-increasing; bisect for the last selling index.
          std::size_t lo = 0;
          std::size_t hi = gi.size() - 1;
          if (sale_indicator(menu, q, c.v, i, gi[hi], inst.grid)) {
            lo = hi;
          } else {
            while (hi - lo > 1) {
              const std::size_t mid = lo + (hi - lo) / 2;
              if (sale_indicator(menu, q, c.v, i, gi[mid], inst.grid)) {
                lo = mid;
              } else {
                hi = mid;
              }
            }
          }
          tail[lo] += c.w;  // tau index = lo
        }
        // suffix-sum: Pr[tau >= a]
        double run = 0.0;
        for (std::size_t a = gi.size(); a-- > 0;) {
          run += tail[a];
          rows[static_cast<std::size_t>(a * nf + flat)] = rev[a] * run;
        }
        for (const int j : opp) {
          auto& ij = idx[static_cast<std::size_t>(j)];
          if (++ij < grids[static_cast<std::size_t>(j)].size()) break;
          ij = 0;
        }
      }
    }
  }
  return t;
}

// Expected utility vector of seller i against independent mixtures given as
// per-seller weights over grid indices.
std::vector<double> tensor_mixed_utilities(const Tensors& t, int i,
                                           const std::vector<std::vector<double>>& weights) {
  const auto& gi = t.grids[static_cast<std::size_t>(i)];
  std::vector<double> u(gi.size(), 0.0);
  std::vector<std::size_t> idx(static_cast<std::size_t>(t.m), 0);
  const std::uint64_t nf = t.nflat[static_cast<std::size_t>(i)];
  for (std::uint64_t flat = 0; flat < nf; ++flat) {
    double w = 1.0;
    for (int j = 0; j < t.m; ++j) {
      if (j != i) w *= weights[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
    }
    if (w > 0.0) {
      for (std::size_t a = 0; a < gi.size(); ++a) {
        u[a] += w * t.cell(i, a, flat);
      }
    }
    for (int j = 0; j < t.m; ++j) {
      if (j == i) continue;
      auto& ij = idx[static_cast<std::size_t>(j)];
      if (++ij < t.grids[static_cast<std::size_t>(j)].size()) break;
      ij = 0;
    }
  }
  return u;
}

std::size_t argmax_highest(const std::vector<double>& u) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < u.size(); ++a) {
    if (u[a] >= u[best]) best = a;
  }
  return best;
}

}  // namespace

BestResponse best_response(const MarketInstance& inst, const Menu& menu,
                           const StrategyProfile& profile, int i) {
  validate_profile(inst, profile);
  const auto grid = price_grid_points(inst, i);
  std::vector<double> u;
  if (menu.kind() != MenuKind::Explicit) {
    auto laws = profile_min_laws(inst, profile);
    std::vector<std::vector<Tick>> queries(static_cast<std::size_t>(inst.item_count()));
    queries[static_cast<std::size_t>(i)] = grid;
    u = factor_utilities(inst, menu, laws, queries).util[static_cast<std::size_t>(i)];
  } else {
    StrategyProfile probe = profile;
    u.reserve(grid.size());
    for (const Tick a : grid) {
      probe[static_cast<std::size_t>(i)] = pure_strategy(a);
      u.push_back(seller_utility_enumeration(inst, menu, probe, i));
    }
  }
  BestResponse br;
  br.value = *std::max_element(u.begin(), u.end());
  for (std::size_t a = 0; a < grid.size(); ++a) {
    if (u[a] == br.value) br.maximizers.push_back(grid[a]);
  }
  return br;
}

DominanceResult iterated_dominance(const MarketInstance& inst, const Menu& menu,
                                   std::uint64_t budget) {
  const int m = inst.item_count();
  DominanceResult res;
  std::vector<std::vector<Tick>> grids;
  for (int i = 0; i < m; ++i) grids.push_back(price_grid_points(inst, i));

  // Round 0: clip to [0, r_i]; prices above the maximal revenue-optimal
  // monopoly price never earn more than the clip point.
  res.surviving.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const Tick r = myerson_tick(inst.items[static_cast<std::size_t>(i)]);
    Tick keep_max = 0;
    for (const Tick a : grids[static_cast<std::size_t>(i)]) {
      if (a <= r) {
        res.surviving[static_cast<std::size_t>(i)].push_back(a);
        keep_max = a;
      }
    }
    for (const Tick a : grids[static_cast<std::size_t>(i)]) {
      if (a > r) res.eliminated.push_back(DominanceElimination{0, i, a, keep_max});
    }
  }

  if (!tensors_feasible(inst, res.surviving)) return res;  // clip only, not certified
  const Tensors t = build_tensors(inst, menu, res.surviving);

  // alive[i][a]: index into the post-clip grids.
  std::vector<std::vector<bool>> alive(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    alive[static_cast<std::size_t>(i)].assign(res.surviving[static_cast<std::size_t>(i)].size(),
                                              true);
  }
  std::uint64_t used = 0;
  bool aborted = false;

  for (int round = 1; !aborted; ++round) {
    bool any = false;
    for (int i = 0; i < m && !aborted; ++i) {
      const auto& gi = res.surviving[static_cast<std::size_t>(i)];
      // Alive opponent flats, enumerated once per seller per round.
      std::vector<std::uint64_t> flats;
      {
        std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
        const auto skip_dead = [&](int j) {
          auto& ij = idx[static_cast<std::size_t>(j)];
          while (ij < alive[static_cast<std::size_t>(j)].size() &&
                 !alive[static_cast<std::size_t>(j)][ij]) {
            ++ij;
          }
          return ij < alive[static_cast<std::size_t>(j)].size();
        };
        bool ok = true;
        for (int j = 0; j < m && ok; ++j) {
          if (j != i) ok = skip_dead(j);
        }
        while (ok) {
          flats.push_back(t.flat_of(i, idx));
          int j = 0;
          for (; j < m; ++j) {
            if (j == i) continue;
            ++idx[static_cast<std::size_t>(j)];
            if (skip_dead(j)) break;
            idx[static_cast<std::size_t>(j)] = 0;
            skip_dead(j);
          }
          if (j == m) break;
        }
      }
      for (std::size_t a = 0; a < gi.size() && !aborted; ++a) {
        if (!alive[static_cast<std::size_t>(i)][a]) continue;
        for (std::size_t bi = gi.size(); bi-- > 0;) {  // highest dominator first
          if (bi == a || !alive[static_cast<std::size_t>(i)][bi]) continue;
          if (used + flats.size() > budget) {
            aborted = true;
            break;
          }
          bool dominates = true;
          for (const std::uint64_t flat : flats) {
            ++used;
            if (t.cell(i, bi, flat) <= t.cell(i, a, flat)) {
              dominates = false;
              break;
            }
          }
          if (dominates) {
            alive[static_cast<std::size_t>(i)][a] = false;
            res.eliminated.push_back(DominanceElimination{round, i, gi[a], gi[bi]});
            res.rounds = round;
            any = true;
            break;
          }
        }
      }
    }
    if (!any) break;
  }

  for (int i = 0; i < m; ++i) {
    std::vector<Tick> keep;
    for (std::size_t a = 0; a < res.surviving[static_cast<std::size_t>(i)].size(); ++a) {
      if (alive[static_cast<std::size_t>(i)][a]) {
        keep.push_back(res.surviving[static_cast<std::size_t>(i)][a]);
      }
    }
    res.surviving[static_cast<std::size_t>(i)] = std::move(keep);
  }
  res.completed = !aborted;
  return res;
}

std::vector<EquilibriumCertificate> find_pure_equilibria(
    const MarketInstance& inst, const Menu& menu, const std::vector<std::vector<Tick>>& grids_in,
    std::uint64_t budget) {
  const int m = inst.item_count();
  const auto grids = resolve_grids(inst, grids_in);
  if (saturating_product(grids) > budget) {
    throw BudgetExceeded("pure profile space exceeds the search budget");
  }

  std::vector<EquilibriumCertificate> found;
  const auto emit = [&](const std::vector<Tick>& ticks) {
    StrategyProfile profile;
    for (const Tick a : ticks) profile.push_back(pure_strategy(a));
    EquilibriumCertificate cert = verify_equilibrium(inst, menu, profile);
    cert.method = SolveMethod::PureBruteForce;
    if (cert.epsilon <= 1e-12) found.push_back(std::move(cert));
  };

  if (tensors_feasible(inst, grids)) {
    const Tensors t = build_tensors(inst, menu, grids);
    // Per-seller max over own price for every opponent flat.
    std::vector<std::vector<double>> maxtab(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const std::uint64_t nf = t.nflat[static_cast<std::size_t>(i)];
      auto& mt = maxtab[static_cast<std::size_t>(i)];
      mt.assign(static_cast<std::size_t>(nf), -1.0);
      for (std::size_t a = 0; a < grids[static_cast<std::size_t>(i)].size(); ++a) {
        for (std::uint64_t flat = 0; flat < nf; ++flat) {
          mt[static_cast<std::size_t>(flat)] =
              std::max(mt[static_cast<std::size_t>(flat)], t.cell(i, a, flat));
        }
      }
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
    std::vector<Tick> ticks(static_cast<std::size_t>(m), 0);
    for (;;) {
      bool ne = true;
      for (int i = 0; i < m && ne; ++i) {
        const std::uint64_t flat = t.flat_of(i, idx);
        ne = t.cell(i, idx[static_cast<std::size_t>(i)], flat) ==
             maxtab[static_cast<std::size_t>(i)][static_cast<std::size_t>(flat)];
      }
      if (ne) {
        for (int i = 0; i < m; ++i) {
          ticks[static_cast<std::size_t>(i)] =
              grids[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
        }
        emit(ticks);
      }
      int j = 0;
      for (; j < m; ++j) {
        auto& ij = idx[static_cast<std::size_t>(j)];
        if (++ij < grids[static_cast<std::size_t>(j)].size()) break;
        ij = 0;
      }
      if (j == m) break;
    }
    return found;
  }

  if (menu.kind() == MenuKind::Explicit) {
    throw UnsupportedMenuAtScale("explicit menus support exact search only at tensor scale");
  }

  // Factor route: per-profile audit via block convolutions.
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  std::vector<Tick> ticks(static_cast<std::size_t>(m), 0);
  for (;;) {
    for (int i = 0; i < m; ++i) {
      ticks[static_cast<std::size_t>(i)] =
          grids[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    }
    StrategyProfile profile;
    for (const Tick a : ticks) profile.push_back(pure_strategy(a));
    auto laws = profile_min_laws(inst, profile);
    bool ne = true;
    for (int i = 0; i < m && ne; ++i) {
      std::vector<std::vector<Tick>> queries(static_cast<std::size_t>(m));
      queries[static_cast<std::size_t>(i)] = grids[static_cast<std::size_t>(i)];
      queries[static_cast<std::size_t>(i)].push_back(ticks[static_cast<std::size_t>(i)]);
      const auto u = factor_utilities(inst, menu, laws, queries).util[static_cast<std::size_t>(i)];
      const double self = u.back();
      for (std::size_t a = 0; a + 1 < u.size() && ne; ++a) ne = u[a] <= self;
    }
    if (ne) emit(ticks);
    int j = 0;
    for (; j < m; ++j) {
      auto& ij = idx[static_cast<std::size_t>(j)];
      if (++ij < grids[static_cast<std::size_t>(j)].size()) break;
      ij = 0;
    }
    if (j == m) break;
  }
  return found;
}

EquilibriumCertificate verify_equilibrium(const MarketInstance& inst, const Menu& menu,
                                          const StrategyProfile& profile, Money tol) {
  validate_profile(inst, profile);
  const int m = inst.item_count();
  EquilibriumCertificate cert;
  cert.profile = profile;
  cert.method = SolveMethod::Verified;
  cert.per_seller_regret.assign(static_cast<std::size_t>(m), 0.0);

  if (menu.kind() != MenuKind::Explicit) {
    const auto laws = profile_min_laws(inst, profile);
    std::vector<std::vector<Tick>> queries(static_cast<std::size_t>(m));
    std::vector<std::size_t> grid_len(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      auto& qq = queries[static_cast<std::size_t>(i)];
      qq = price_grid_points(inst, i);
      grid_len[static_cast<std::size_t>(i)] = qq.size();
      for (const Tick a : profile[static_cast<std::size_t>(i)].ticks) qq.push_back(a);
    }
    const FactorUtilities fu = factor_utilities(inst, menu, laws, queries);
    for (int i = 0; i < m; ++i) {
      const auto& u = fu.util[static_cast<std::size_t>(i)];
      const auto& s = profile[static_cast<std::size_t>(i)];
      const std::size_t ng = grid_len[static_cast<std::size_t>(i)];
      double best = 0.0;
      for (std::size_t a = 0; a < ng; ++a) best = std::max(best, u[a]);
      double self = 0.0;
      for (std::size_t k = 0; k < s.ticks.size(); ++k) self += s.probs[k] * u[ng + k];
      cert.per_seller_regret[static_cast<std::size_t>(i)] = std::max(0.0, best - self);
    }
    cert.principal_revenue = fu.principal;
  } else {
    if (m > kMaxEnumerationItems) {
      throw UnsupportedMenuAtScale("explicit menus audit by enumeration (at most 4 items)");
    }
    StrategyProfile probe = profile;
    for (int i = 0; i < m; ++i) {
      const double self = seller_utility_enumeration(inst, menu, profile, i);
      double best = self;
      for (const Tick a : price_grid_points(inst, i)) {
        probe[static_cast<std::size_t>(i)] = pure_strategy(a);
        best = std::max(best, seller_utility_enumeration(inst, menu, probe, i));
      }
      probe[static_cast<std::size_t>(i)] = profile[static_cast<std::size_t>(i)];
      cert.per_seller_regret[static_cast<std::size_t>(i)] = std::max(0.0, best - self);
    }
    cert.principal_revenue = principal_revenue_enumeration(inst, menu, profile);
  }
  cert.epsilon = 0.0;
  for (const double r : cert.per_seller_regret) cert.epsilon = std::max(cert.epsilon, r);
  cert.lex_tiebreak_used = m <= kMaxEnumerationItems &&
                           enumeration_uses_lex_tiebreak(inst, menu, profile);
  (void)tol;
  return cert;
}

EquilibriumCertificate fictitious_play(const MarketInstance& inst, const Menu& menu,
                                       std::uint64_t seed, const DynamicsOptions& opts) {
  const int m = inst.item_count();
  const auto grids = resolve_grids(inst, opts.grids);
  Rng rng(seed);

  const bool tensor_mode = tensors_feasible(inst, grids);
  if (!tensor_mode && menu.kind() == MenuKind::Explicit) {
    throw UnsupportedMenuAtScale("fictitious play on explicit menus needs tensor scale");
  }

  Tensors tensors;
  if (tensor_mode) tensors = build_tensors(inst, menu, grids);

  std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    counts[static_cast<std::size_t>(i)].assign(grids[static_cast<std::size_t>(i)].size(), 0);
  }
  // Tensor mode: per-seller utility numerators against the joint history
  // (exact by linearity; used for best responses). Factor mode: per-seller
  // unnormalized min-value law accumulators, linear in the history as well.
  std::vector<std::vector<double>> num(static_cast<std::size_t>(m));
  std::vector<Pmf> law_num(static_cast<std::size_t>(m));
  std::vector<std::size_t> cur(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    cur[static_cast<std::size_t>(i)] =
        static_cast<std::size_t>(rng.below(grids[static_cast<std::size_t>(i)].size()));
    if (tensor_mode) {
      num[static_cast<std::size_t>(i)].assign(grids[static_cast<std::size_t>(i)].size(), 0.0);
    }
  }

  const auto add_history = [&](const std::vector<std::size_t>& idx) {
    for (int i = 0; i < m; ++i) {
      counts[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]] += 1;
      if (tensor_mode) {
        const std::uint64_t flat = tensors.flat_of(i, idx);
        auto& ni = num[static_cast<std::size_t>(i)];
        for (std::size_t a = 0; a < ni.size(); ++a) ni[a] += tensors.cell(i, a, flat);
      } else {
        const Tick q = grids[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
        const Pmf one = min_value_law_pure(inst.items[static_cast<std::size_t>(i)], q);
        auto& acc = law_num[static_cast<std::size_t>(i)];
        if (acc.mass.size() < one.mass.size()) acc.mass.resize(one.mass.size(), 0.0);
        for (const Tick tt : one.nz) {
          acc.mass[static_cast<std::size_t>(tt)] += one.mass[static_cast<std::size_t>(tt)];
        }
        acc.nz.clear();
        for (Tick tt = 0; tt < static_cast<Tick>(acc.mass.size()); ++tt) {
          if (acc.mass[static_cast<std::size_t>(tt)] > 0.0) acc.nz.push_back(tt);
        }
      }
    }
  };
  add_history(cur);
  std::uint64_t t = 1;

  const auto weights = [&]() {
    std::vector<std::vector<double>> w(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      auto& wi = w[static_cast<std::size_t>(i)];
      wi.resize(counts[static_cast<std::size_t>(i)].size());
      for (std::size_t a = 0; a < wi.size(); ++a) {
        wi[a] = static_cast<double>(counts[static_cast<std::size_t>(i)][a]) /
                static_cast<double>(t);
      }
    }
    return w;
  };
  const auto empirical_profile = [&]() {
    StrategyProfile profile;
    for (int i = 0; i < m; ++i) {
      std::vector<Tick> ticks;
      std::vector<double> probs;
      for (std::size_t a = 0; a < counts[static_cast<std::size_t>(i)].size(); ++a) {
        const std::uint64_t c = counts[static_cast<std::size_t>(i)][a];
        if (c > 0) {
          ticks.push_back(grids[static_cast<std::size_t>(i)][a]);
          probs.push_back(static_cast<double>(c) / static_cast<double>(t));
        }
      }
      profile.push_back(make_strategy(std::move(ticks), std::move(probs)));
    }
    return profile;
  };

  // Cheap audit candidates: full certificate fields (revenue, tie-break flag)
  // are filled only for the final pick.
  struct Candidate {
    StrategyProfile profile;
    std::vector<Money> regrets;
    Money eps = std::numeric_limits<double>::infinity();
    int iterations = 0;
  };
  Candidate best;

  const auto consider = [&](StrategyProfile profile, std::vector<Money> regrets, int iters) {
    Money eps = 0.0;
    for (const Money r : regrets) eps = std::max(eps, r);
    if (eps < best.eps) {
      best = Candidate{std::move(profile), std::move(regrets), eps, iters};
    }
    return eps <= opts.tol;
  };

  // Regret of the product of empirical marginals, against grid deviations.
  const auto audit_mixture = [&](int iters) {
    std::vector<Money> regrets(static_cast<std::size_t>(m), 0.0);
    if (tensor_mode) {
      const auto w = weights();
      for (int i = 0; i < m; ++i) {
        const auto u = tensor_mixed_utilities(tensors, i, w);
        double self = 0.0;
        for (std::size_t a = 0; a < u.size(); ++a) {
          self += w[static_cast<std::size_t>(i)][a] * u[a];
        }
        const double top = *std::max_element(u.begin(), u.end());
        regrets[static_cast<std::size_t>(i)] = std::max(0.0, top - self);
      }
    } else {
      std::vector<Pmf> laws(static_cast<std::size_t>(m));
      const double inv = 1.0 / static_cast<double>(t);
      for (int i = 0; i < m; ++i) {
        laws[static_cast<std::size_t>(i)] = law_num[static_cast<std::size_t>(i)];
        for (double& x : laws[static_cast<std::size_t>(i)].mass) x *= inv;
      }
      const FactorUtilities fu = factor_utilities(inst, menu, laws, grids);
      for (int i = 0; i < m; ++i) {
        const auto& u = fu.util[static_cast<std::size_t>(i)];
        double self = 0.0;
        for (std::size_t a = 0; a < u.size(); ++a) {
          self += u[a] * static_cast<double>(counts[static_cast<std::size_t>(i)][a]) /
                  static_cast<double>(t);
        }
        const double top = *std::max_element(u.begin(), u.end());
        regrets[static_cast<std::size_t>(i)] = std::max(0.0, top - self);
      }
    }
    return consider(empirical_profile(), std::move(regrets), iters);
  };

  // Exact regret of a pure profile.
  const auto audit_pure = [&](const std::vector<std::size_t>& idx, int iters) {
    StrategyProfile profile;
    std::vector<Money> regrets(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
      profile.push_back(
          pure_strategy(grids[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]));
    }
    if (tensor_mode) {
      for (int i = 0; i < m; ++i) {
        const std::uint64_t flat = tensors.flat_of(i, idx);
        const std::size_t na = grids[static_cast<std::size_t>(i)].size();
        double top = 0.0;
        for (std::size_t a = 0; a < na; ++a) top = std::max(top, tensors.cell(i, a, flat));
        regrets[static_cast<std::size_t>(i)] =
            std::max(0.0, top - tensors.cell(i, idx[static_cast<std::size_t>(i)], flat));
      }
    } else {
      const auto laws = profile_min_laws(inst, profile);
      const FactorUtilities fu = factor_utilities(inst, menu, laws, grids);
      for (int i = 0; i < m; ++i) {
        const auto& u = fu.util[static_cast<std::size_t>(i)];
        const double top = *std::max_element(u.begin(), u.end());
        regrets[static_cast<std::size_t>(i)] =
            std::max(0.0, top - u[idx[static_cast<std::size_t>(i)]]);
      }
    }
    return consider(std::move(profile), std::move(regrets), iters);
  };

  std::vector<std::size_t> last_br;
  int stationary = 0;
  int done_iters = opts.max_iters;

  for (int iter = 1; iter <= opts.max_iters; ++iter) {
    // Joint best response to the current beliefs, ties to the highest price.
    std::vector<std::size_t> br(static_cast<std::size_t>(m), 0);
    if (tensor_mode) {
      for (int i = 0; i < m; ++i) {
        br[static_cast<std::size_t>(i)] = argmax_highest(num[static_cast<std::size_t>(i)]);
      }
    } else {
      std::vector<Pmf> laws(static_cast<std::size_t>(m));
      const double inv = 1.0 / static_cast<double>(t);
      for (int i = 0; i < m; ++i) {
        laws[static_cast<std::size_t>(i)] = law_num[static_cast<std::size_t>(i)];
        for (double& x : laws[static_cast<std::size_t>(i)].mass) x *= inv;
      }
      const FactorUtilities fu = factor_utilities(inst, menu, laws, grids);
      for (int i = 0; i < m; ++i) {
        br[static_cast<std::size_t>(i)] = argmax_highest(fu.util[static_cast<std::size_t>(i)]);
      }
    }

    if (br == last_br) {
      ++stationary;
    } else {
      stationary = 1;
      last_br = br;
    }
    if (stationary >= opts.check_every) {
      stationary = 0;
      if (audit_pure(br, iter)) {
        done_iters = iter;
        break;
      }
    }
    add_history(br);
    ++t;
    if (iter % opts.check_every == 0 && audit_mixture(iter)) {
      done_iters = iter;
      break;
    }
  }
  if (best.eps > opts.tol) audit_mixture(done_iters);

  EquilibriumCertificate cert;
  cert.profile = std::move(best.profile);
  cert.per_seller_regret = std::move(best.regrets);
  cert.epsilon = best.eps;
  cert.principal_revenue = principal_revenue(inst, menu, cert.profile);
  cert.method = SolveMethod::FictitiousPlay;
  cert.seed = seed;
  cert.iterations = best.iterations;
  cert.lex_tiebreak_used = m <= kMaxEnumerationItems &&
                           enumeration_uses_lex_tiebreak(inst, menu, cert.profile);
  return cert;
}

EquilibriumCertificate iterated_best_response(const MarketInstance& inst, const Menu& menu,
                                              std::uint64_t seed, const DynamicsOptions& opts) {
  const int m = inst.item_count();
  const auto grids = resolve_grids(inst, opts.grids);
  const bool tensor_mode = tensors_feasible(inst, grids);
  if (!tensor_mode && menu.kind() == MenuKind::Explicit) {
    throw UnsupportedMenuAtScale("best-response iteration on explicit menus needs tensor scale");
  }
  Tensors tensors;
  if (tensor_mode) tensors = build_tensors(inst, menu, grids);

  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  if (seed == 1) {
    for (int i = 0; i < m; ++i) {
      idx[static_cast<std::size_t>(i)] = grids[static_cast<std::size_t>(i)].size() - 1;
    }
  } else if (seed == 2) {
    // all-zero start
  } else {
    Rng rng(seed);
    for (int i = 0; i < m; ++i) {
      idx[static_cast<std::size_t>(i)] = rng.below(grids[static_cast<std::size_t>(i)].size());
    }
  }

  std::set<std::vector<std::size_t>> seen;
  seen.insert(idx);
  int sweeps = 0;
  for (; sweeps < opts.max_iters; ++sweeps) {
    bool changed = false;
    for (int i = 0; i < m; ++i) {
      std::vector<double> u;
      if (tensor_mode) {
        const std::uint64_t flat = tensors.flat_of(i, idx);
        const auto& gi = grids[static_cast<std::size_t>(i)];
        u.resize(gi.size());
        for (std::size_t a = 0; a < gi.size(); ++a) u[a] = tensors.cell(i, a, flat);
      } else {
        StrategyProfile profile;
        for (int j = 0; j < m; ++j) {
          profile.push_back(pure_strategy(
              grids[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]]));
        }
        auto laws = profile_min_laws(inst, profile);
        std::vector<std::vector<Tick>> queries(static_cast<std::size_t>(m));
        queries[static_cast<std::size_t>(i)] = grids[static_cast<std::size_t>(i)];
        u = factor_utilities(inst, menu, laws, queries).util[static_cast<std::size_t>(i)];
      }
      const std::size_t pick = argmax_highest(u);
      if (pick != idx[static_cast<std::size_t>(i)]) {
        idx[static_cast<std::size_t>(i)] = pick;
        changed = true;
      }
    }
    if (!changed) break;             // fixpoint
    if (!seen.insert(idx).second) break;  // cycle
  }

  StrategyProfile profile;
  for (int i = 0; i < m; ++i) {
    profile.push_back(
        pure_strategy(grids[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]]));
  }
  EquilibriumCertificate cert = verify_equilibrium(inst, menu, profile);
  cert.method = SolveMethod::IteratedBR;
  cert.seed = seed;
  cert.iterations = sweeps;
  return cert;
}

std::vector<SubGame> partition_decompose(const MarketInstance& inst, const Menu& menu) {
  std::vector<SubGame> subs;
  if (menu.kind() != MenuKind::Partition) {
    SubGame whole{inst, menu, {}};
    for (int i = 0; i < inst.item_count(); ++i) whole.items.push_back(i);
    subs.push_back(std::move(whole));
    return subs;
  }
  std::vector<bool> covered(static_cast<std::size_t>(inst.item_count()), false);
  const auto make_sub = [&](const std::vector<int>& items, Tick price) {
    std::vector<DiscreteDistribution> dists;
    PriceGrid pg;
    pg.step_ticks = inst.prices.step_ticks;
    for (const int j : items) {
      dists.push_back(inst.items[static_cast<std::size_t>(j)]);
      pg.ub_ticks.push_back(inst.prices.ub_ticks[static_cast<std::size_t>(j)]);
    }
    return SubGame{make_instance(inst.grid, std::move(dists), pg),
                   Menu::grand_bundle(static_cast<int>(items.size()), price), items};
  };
  for (const auto& block : menu_blocks(menu)) {
    for (const int j : block.items) covered[static_cast<std::size_t>(j)] = true;
    subs.push_back(make_sub(block.items, block.price));
  }
  for (int i = 0; i < inst.item_count(); ++i) {
    if (!covered[static_cast<std::size_t>(i)]) {
      subs.push_back(make_sub({i}, kInfTicks));  // monopoly: unbuyable bundle
    }
  }
  return subs;
}

StrategyProfile compose_profiles(const MarketInstance& inst, const std::vector<SubGame>& subgames,
                                 const std::vector<StrategyProfile>& block_profiles) {
  if (subgames.size() != block_profiles.size()) {
    throw OffGridValue("one profile per sub-game required");
  }
  StrategyProfile whole(static_cast<std::size_t>(inst.item_count()));
  std::vector<bool> placed(static_cast<std::size_t>(inst.item_count()), false);
  for (std::size_t b = 0; b < subgames.size(); ++b) {
    const auto& sub = subgames[b];
    if (sub.items.size() != block_profiles[b].size()) {
      throw OffGridValue("sub-game profile size mismatch");
    }
    for (std::size_t k = 0; k < sub.items.size(); ++k) {
      const int j = sub.items[k];
      whole[static_cast<std::size_t>(j)] = block_profiles[b][k];
      placed[static_cast<std::size_t>(j)] = true;
    }
  }
  for (const bool p : placed) {
    if (!p) throw OffGridValue("sub-games do not cover every item");
  }
  return whole;
}

std::vector<EquilibriumCertificate> enumerate_mixed_2seller(
    const MarketInstance& inst, const Menu& menu, const std::vector<std::vector<Tick>>& grids_in,
    int max_support, std::uint64_t budget) {
  if (inst.item_count() != 2) {
    throw UnsupportedMenuAtScale("mixed support enumeration is two-seller only");
  }
  const auto grids = resolve_grids(inst, grids_in);
  if (!tensors_feasible(inst, grids)) {
    throw BudgetExceeded("price grids too large for exact two-seller tables");
  }
  const Tensors t = build_tensors(inst, menu, grids);
  const std::size_t n0 = grids[0].size();
  const std::size_t n1 = grids[1].size();

  // Budget: number of support pairs enumerated.
  const auto choose = [](std::size_t n, int k) {
    double c = 1.0;
    for (int j = 0; j < k; ++j) c = c * static_cast<double>(n - static_cast<std::size_t>(j)) /
                                     static_cast<double>(j + 1);
    return c;
  };
  double pairs = 0.0;
  for (int k = 1; k <= max_support; ++k) pairs += choose(n0, k) * choose(n1, k);
  if (pairs > static_cast<double>(budget)) {
    throw BudgetExceeded("support pair space exceeds the enumeration budget");
  }

  // cell(0, a, b): seller 0 plays grid0[a] vs seller 1 at grid1[b];
  // cell(1, b, a) symmetric.
  const auto solve_square = [](std::vector<std::vector<double>> mat, std::vector<double> rhs,
                               std::vector<double>& sol) {
    const std::size_t k = rhs.size();
    for (std::size_t col = 0; col < k; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < k; ++r) {
        if (std::fabs(mat[r][col]) > std::fabs(mat[piv][col])) piv = r;
      }
      if (std::fabs(mat[piv][col]) < 1e-12) return false;
      std::swap(mat[piv], mat[col]);
      std::swap(rhs[piv], rhs[col]);
      for (std::size_t r = 0; r < k; ++r) {
        if (r == col) continue;
        const double f = mat[r][col] / mat[col][col];
        for (std::size_t c = col; c < k; ++c) mat[r][c] -= f * mat[col][c];
        rhs[r] -= f * rhs[col];
      }
    }
    sol.resize(k);
    for (std::size_t r = 0; r < k; ++r) sol[r] = rhs[r] / mat[r][r];
    return true;
  };

  std::vector<EquilibriumCertificate> found;
  std::set<std::string> keys;

  for (int k = 1; k <= max_support; ++k) {
    // Both supports have size k, so k is capped by the smaller grid.
    if (static_cast<std::size_t>(k) > n0 || static_cast<std::size_t>(k) > n1) break;
    std::vector<std::size_t> s0(static_cast<std::size_t>(k));
    std::vector<std::size_t> s1(static_cast<std::size_t>(k));
    // Lexicographic combinations of indices.
    const auto first_comb = [&](std::vector<std::size_t>& s) {
      for (int j = 0; j < k; ++j) s[static_cast<std::size_t>(j)] = static_cast<std::size_t>(j);
    };
    const auto next_comb = [&](std::vector<std::size_t>& s, std::size_t n) {
      int j = k - 1;
      while (j >= 0 && s[static_cast<std::size_t>(j)] == n - static_cast<std::size_t>(k - j)) --j;
      if (j < 0) return false;
      ++s[static_cast<std::size_t>(j)];
      for (int l = j + 1; l < k; ++l) {
        s[static_cast<std::size_t>(l)] = s[static_cast<std::size_t>(l - 1)] + 1;
      }
      return true;
    };

    for (first_comb(s0);;) {
      for (first_comb(s1);;) {
        // Seller 0 indifferent across s0 under seller 1's mix y over s1, and
        // symmetrically; probabilities solve k x k linear systems.
        std::vector<double> y, x;
        bool ok = true;
        {
          std::vector<std::vector<double>> mat(static_cast<std::size_t>(k),
                                               std::vector<double>(static_cast<std::size_t>(k)));
          std::vector<double> rhs(static_cast<std::size_t>(k), 0.0);
          for (int c = 0; c < k; ++c) mat[0][static_cast<std::size_t>(c)] = 1.0;
          rhs[0] = 1.0;
          for (int r = 1; r < k; ++r) {
            for (int c = 0; c < k; ++c) {
              const std::uint64_t flat = s1[static_cast<std::size_t>(c)];
              mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                  t.cell(0, s0[0], flat) - t.cell(0, s0[static_cast<std::size_t>(r)], flat);
            }
          }
          ok = solve_square(std::move(mat), std::move(rhs), y);
        }
        if (ok) {
          std::vector<std::vector<double>> mat(static_cast<std::size_t>(k),
                                               std::vector<double>(static_cast<std::size_t>(k)));
          std::vector<double> rhs(static_cast<std::size_t>(k), 0.0);
          for (int c = 0; c < k; ++c) mat[0][static_cast<std::size_t>(c)] = 1.0;
          rhs[0] = 1.0;
          for (int r = 1; r < k; ++r) {
            for (int c = 0; c < k; ++c) {
              const std::uint64_t flat = s0[static_cast<std::size_t>(c)];
              mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                  t.cell(1, s1[0], flat) - t.cell(1, s1[static_cast<std::size_t>(r)], flat);
            }
          }
          ok = solve_square(std::move(mat), std::move(rhs), x);
        }
        if (ok) {
          for (const double p : y) ok = ok && p > -1e-9;
          for (const double p : x) ok = ok && p > -1e-9;
        }
        if (ok) {
          const auto build = [&](const std::vector<std::size_t>& sup,
                                 const std::vector<double>& probs, int seller) {
            std::vector<Tick> ticks;
            std::vector<double> pr;
            double total = 0.0;
            for (const double p : probs) total += std::max(0.0, p);
            for (std::size_t j = 0; j < sup.size(); ++j) {
              const double p = std::max(0.0, probs[j]) / total;
              if (p > 0.0) {
                ticks.push_back(grids[static_cast<std::size_t>(seller)][sup[j]]);
                pr.push_back(p);
              }
            }
            return make_strategy(std::move(ticks), std::move(pr));
          };
          StrategyProfile profile{build(s0, x, 0), build(s1, y, 1)};
          EquilibriumCertificate cert = verify_equilibrium(inst, menu, profile);
          if (cert.epsilon <= 1e-9) {
            const std::string key = profile_key(cert.profile);
            if (keys.insert(key).second) found.push_back(std::move(cert));
          }
        }
        if (!next_comb(s1, n1)) break;
      }
      if (!next_comb(s0, n0)) break;
    }
  }
  return found;
}

SolveReport solve_all(const MarketInstance& inst, const Menu& menu, const SolverOptions& opts) {
  const int m = inst.item_count();
  SolveReport report;
  if (menu.kind() == MenuKind::Explicit && m > 3) {
    throw UnsupportedMenuAtScale("explicit menus solve at up to 3 items");
  }

  report.dominance = iterated_dominance(inst, menu, opts.dominance_budget);
  const auto& grids = report.dominance.surviving;

  std::set<std::string> keys;
  const auto admit = [&](EquilibriumCertificate cert) {
    if (cert.epsilon <= opts.dynamics.tol) {
      // Dynamics audit against their working grids; re-certify candidates on
      // the full grids before reporting them as equilibria.
      if (cert.method == SolveMethod::FictitiousPlay) {
        EquilibriumCertificate full = verify_equilibrium(inst, menu, cert.profile);
        full.method = cert.method;
        full.seed = cert.seed;
        full.iterations = cert.iterations;
        cert = std::move(full);
      }
    }
    if (cert.epsilon <= opts.dynamics.tol) {
      if (keys.insert(profile_key(cert.profile)).second) {
        report.equilibria.push_back(std::move(cert));
      }
    } else {
      report.unconverged.push_back(std::move(cert));
    }
  };

  // Partition menus split into independent block games; solve each and
  // compose the cross-product of their certified equilibria.
  if (menu.kind() == MenuKind::Partition && m > 1) {
    const auto subs = partition_decompose(inst, menu);
    if (subs.size() > 1) {
      std::vector<std::vector<StrategyProfile>> block_eqs;
      for (const auto& sub : subs) {
        SolveReport sr = solve_all(sub.instance, sub.menu, opts);
        report.budget_hit = report.budget_hit || sr.budget_hit;
        std::vector<StrategyProfile> profs;
        for (auto& cert : sr.equilibria) profs.push_back(cert.profile);
        if (profs.empty()) {
          for (auto& cert : sr.unconverged) report.unconverged.push_back(std::move(cert));
        }
        block_eqs.push_back(std::move(profs));
      }
      bool all_blocks = true;
      for (const auto& eqs : block_eqs) all_blocks = all_blocks && !eqs.empty();
      if (all_blocks) {
        constexpr std::uint64_t kMaxCompositions = 64;
        std::vector<std::size_t> pick(block_eqs.size(), 0);
        std::uint64_t emitted = 0;
        for (;;) {
          std::vector<StrategyProfile> parts;
          for (std::size_t b = 0; b < block_eqs.size(); ++b) parts.push_back(block_eqs[b][pick[b]]);
          EquilibriumCertificate cert =
              verify_equilibrium(inst, menu, compose_profiles(inst, subs, parts));
          admit(std::move(cert));
          if (++emitted >= kMaxCompositions) {
            report.budget_hit = true;
            break;
          }
          std::size_t b = 0;
          for (; b < block_eqs.size(); ++b) {
            if (++pick[b] < block_eqs[b].size()) break;
            pick[b] = 0;
          }
          if (b == block_eqs.size()) break;
        }
        std::sort(report.equilibria.begin(), report.equilibria.end(),
                  [](const EquilibriumCertificate& a, const EquilibriumCertificate& b) {
                    if (a.principal_revenue != b.principal_revenue) {
                      return a.principal_revenue < b.principal_revenue;
                    }
                    return profile_key(a.profile) < profile_key(b.profile);
                  });
        return report;
      }
      // fall through to whole-game dynamics when a block failed to certify
    }
  }

  if (saturating_product(grids) <= opts.pure_budget) {
    try {
      for (auto& cert : find_pure_equilibria(inst, menu, grids, opts.pure_budget)) {
        admit(std::move(cert));
      }
      report.pure_search_ran = true;
    } catch (const BudgetExceeded&) {
      report.budget_hit = true;
    }
  } else {
    report.budget_hit = true;
  }

  if (m == 2) {
    try {
      for (auto& cert : enumerate_mixed_2seller(inst, menu, grids)) {
        admit(std::move(cert));
      }
    } catch (const BudgetExceeded&) {
      report.budget_hit = true;
    }
  }

  DynamicsOptions dyn = opts.dynamics;
  dyn.grids = grids;
  for (const std::uint64_t seed : opts.seeds) {
    if (opts.run_iterated_br) admit(iterated_best_response(inst, menu, seed, dyn));
    if (opts.run_fictitious_play) admit(fictitious_play(inst, menu, seed, dyn));
  }

  std::sort(report.equilibria.begin(), report.equilibria.end(),
            [](const EquilibriumCertificate& a, const EquilibriumCertificate& b) {
              if (a.principal_revenue != b.principal_revenue) {
                return a.principal_revenue < b.principal_revenue;
              }
              return profile_key(a.profile) < profile_key(b.profile);
            });
  return report;
}

}  // namespace bundleduel
