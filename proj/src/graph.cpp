#include "qlab/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qlab {

namespace {

constexpr int R_GUARD = 1 << 14;

// signed witness (q, a, b) for a centered difference (dx, dt), lexicographically
// smallest; t-interval replaced by the dyadic annulus when requested
bool find_witness(const Rat& dx, const Rat& dt, const DyadicLevel& level, i64 N,
                  const Rat& eps_c, bool dyadic, LabeledDiff& out) {
    for (i64 q = level.Q; q < 2 * level.Q; ++q) {
        Rat wt = Rat(1) / Rat::make128((i128)level.pow2l() * q * N, 1);
        Rat wt_lo = dyadic && level.pow2l() * level.Q < N
                        ? Rat(1) / Rat::make128((i128)level.pow2l() * 2 * q * N, 1)
                        : Rat(0);
        // signed representatives nearest the centered difference: plain distance
        i64 a_found = 0;
        bool have_a = false;
        i64 fa = (dt * Rat(q)).floor();
        for (i64 a : {fa, fa + 1}) {
            if (a > q - 1 || a < -(q - 1)) continue;
            if (!LabeledDiff{a, 0, q}.valid()) continue;
            Rat d = (dt - Rat(a, q)).abs();
            if (d > wt) continue;
            if (dyadic && wt_lo.num != 0 && d < wt_lo) continue;
            if (!have_a || a < a_found) {
                a_found = a;
                have_a = true;
            }
        }
        if (!have_a) continue;
        Rat wx = eps_c / Rat::make128((i128)level.pow2l() * q, 1);
        i64 b_found = 0;
        bool have_b = false;
        i64 c_lo = ((dx - wx) * Rat(q)).floor();
        i64 c_hi = ((dx + wx) * Rat(q)).floor() + 1;
        for (i64 b = c_lo; b <= c_hi; ++b) {
            if (b > q - 1 || b < -(q - 1)) continue;
            if ((dx - Rat(b, q)).abs() > wx) continue;
            b_found = b;
            have_b = true;
            break;  // ascending scan: first hit is the smallest b
        }
        if (!have_b) continue;
        out = LabeledDiff{a_found, b_found, q};
        return true;
    }
    return false;
}

i64 popcount_and(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    i64 n = 0;
    for (size_t w = 0; w < a.size(); ++w) n += std::popcount(a[w] & b[w]);
    return n;
}

}  // namespace

i64 ConfigGraph::edge_count() const {
    i64 twice = 0;
    for (const auto& row : adj_bits)
        for (std::uint64_t w : row) twice += std::popcount(w);
    return twice / 2;
}

double ConfigGraph::K_emp() const {
    i64 E = edge_count();
    if (E == 0) return std::numeric_limits<double>::infinity();
    double r = (double)R();
    return r * r / (2.0 * (double)E);
}

bool ConfigGraph::has_edge(int i, int j) const {
    return (adj_bits[(size_t)i][(size_t)j >> 6] >> (j & 63)) & 1u;
}

void ConfigGraph::set_edge(int i, int j) {
    adj_bits[(size_t)i][(size_t)j >> 6] |= 1ull << (j & 63);
    adj_bits[(size_t)j][(size_t)i >> 6] |= 1ull << (i & 63);
}

LabeledDiff ConfigGraph::label(int i, int j) const {
    auto it = labels.find({std::min(i, j), std::max(i, j)});
    if (it == labels.end()) throw std::invalid_argument("label: no such edge");
    return i < j ? it->second : it->second.negated();
}

i64 ConfigGraph::common_count(int i, int j) const {
    return popcount_and(adj_bits[(size_t)i], adj_bits[(size_t)j]);
}

std::vector<int> ConfigGraph::common_neighbors(int i, int j) const {
    std::vector<int> out;
    const auto& a = adj_bits[(size_t)i];
    const auto& b = adj_bits[(size_t)j];
    for (size_t w = 0; w < a.size(); ++w) {
        std::uint64_t m = a[w] & b[w];
        while (m) {
            int bit = std::countr_zero(m);
            out.push_back((int)(w * 64) + bit);
            m &= m - 1;
        }
    }
    return out;
}

ConfigGraph ConfigGraph::from_adjacency(int R, const std::vector<std::pair<int, int>>& edges) {
    if (R < 0 || R > R_GUARD) throw std::domain_error("from_adjacency: vertex count out of range");
    ConfigGraph g;
    g.adj_bits.assign((size_t)R, std::vector<std::uint64_t>(((size_t)R + 63) / 64, 0));
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= R || j >= R || i == j)
            throw std::invalid_argument("from_adjacency: bad edge");
        g.set_edge(i, j);
    }
    return g;
}

ConfigGraph build_graph(const std::vector<TorusPoint>& points, i64 N, const DyadicLevel& level,
                        const Rat& eps_c) {
    if ((i64)points.size() > R_GUARD) throw std::domain_error("build_graph: vertex count exceeds guard");
    if (!level.valid_for(N)) throw std::domain_error("build_graph: invalid level for N");
    int R = (int)points.size();
    // 1/N separation of x-coordinates, checked on the raw rationals
    {
        std::vector<Rat> xs;
        xs.reserve(points.size());
        for (const auto& z : points) xs.push_back(z.x);
        std::sort(xs.begin(), xs.end());
        Rat step(1, N);
        for (size_t i = 1; i < xs.size(); ++i)
            if (xs[i] - xs[i - 1] < step)
                throw std::invalid_argument("build_graph: x-coordinates are not 1/N-separated");
    }
    ConfigGraph g;
    g.vertices = points;
    g.N = N;
    g.level = level;
    g.adj_bits.assign((size_t)R, std::vector<std::uint64_t>(((size_t)R + 63) / 64, 0));
    for (int i = 0; i < R; ++i)
        for (int j = i + 1; j < R; ++j) {
            Rat dx = (points[(size_t)i].x - points[(size_t)j].x).mod1_centered();
            Rat dt = (points[(size_t)i].t - points[(size_t)j].t).mod1_centered();
            LabeledDiff w;
            if (!find_witness(dx, dt, level, N, eps_c, false, w)) continue;
            g.set_edge(i, j);
            g.labels[{i, j}] = w;
        }
    return g;
}

PopularResult popular_pairs(const ConfigGraph& g, double K) {
    if (!(K > 0.0)) throw std::domain_error("popular_pairs: K must be positive");
    int R = g.R();
    double threshold = (double)R / (4.0 * K * K);
    PopularResult res;
    for (int i = 0; i < R; ++i)
        for (int j = i + 1; j < R; ++j) {
            i64 c = g.common_count(i, j);
            if ((double)c >= threshold) {
                res.pairs.emplace_back(i, j);
                res.sum_common += c;
            }
        }
    return res;
}

std::map<DpfKey, std::vector<int>> dpf_partition(const ConfigGraph& g, int v1, int v2) {
    if (v1 == v2) throw std::invalid_argument("dpf_partition: vertices must be distinct");
    std::map<DpfKey, std::vector<int>> out;
    for (int v3 : g.common_neighbors(v1, v2)) {
        if (v3 == v1 || v3 == v2) continue;
        GcdProfile pr = gcd_profile(g.label(v1, v3), g.label(v3, v2));
        out[{dyadic_block(pr.d), dyadic_block(pr.p), dyadic_block(pr.f)}].push_back(v3);
    }
    return out;
}

DominantTriple dominant_triple(const ConfigGraph& g, double K) {
    PopularResult pop = popular_pairs(g, K);
    if (pop.pairs.empty()) throw std::domain_error("dominant_triple: no popular pairs");
    std::map<DpfKey, DominantTriple> groups;
    for (auto [i, j] : pop.pairs) {
        auto part = dpf_partition(g, i, j);
        if (part.empty()) continue;
        // maximizing key, smallest lexicographic on ties (map order is lexicographic)
        DpfKey best{};
        size_t best_n = 0;
        for (const auto& [key, members] : part)
            if (members.size() > best_n) {
                best = key;
                best_n = members.size();
            }
        auto& grp = groups[best];
        grp.popular_subset.emplace_back(i, j);
        grp.group_sum += (i64)part.at(best).size();
    }
    if (groups.empty()) throw std::domain_error("dominant_triple: no partitioned pairs");
    const DpfKey* best_key = nullptr;
    i64 best_sum = -1;
    for (const auto& [key, grp] : groups)
        if (grp.group_sum > best_sum) {
            best_key = &key;
            best_sum = grp.group_sum;
        }
    DominantTriple out = groups.at(*best_key);
    out.D = std::get<0>(*best_key);
    out.P = std::get<1>(*best_key);
    out.F = std::get<2>(*best_key);
    return out;
}

namespace {

// largest class by value of `key` over members, smallest key on ties
template <typename KeyFn>
std::vector<int> pigeonhole(const std::vector<int>& members, KeyFn key, i64& fixed) {
    std::map<i64, std::vector<int>> classes;
    for (int v : members) classes[key(v)].push_back(v);
    const i64* best = nullptr;
    size_t best_n = 0;
    for (const auto& [k, vs] : classes)
        if (vs.size() > best_n) {
            best = &k;
            best_n = vs.size();
        }
    fixed = *best;
    return classes.at(*best);
}

}  // namespace

ForkChain extract_fork(const ConfigGraph& g, i64 D, i64 P, i64 F) {
    int R = g.R();
    ForkChain best;
    std::vector<int> best_S;
    for (int v1 = 0; v1 < R; ++v1)
        for (int v3 = 0; v3 < R; ++v3) {
            if (v1 == v3 || !g.has_edge(v1, v3)) continue;
            LabeledDiff h = g.label(v1, v3);
            std::vector<int> S;
            for (size_t w = 0; w < g.adj_bits[(size_t)v3].size(); ++w) {
                std::uint64_t m = g.adj_bits[(size_t)v3][w];
                while (m) {
                    int v2 = (int)(w * 64) + std::countr_zero(m);
                    m &= m - 1;
                    if (v2 == v1 || v2 == v3) continue;
                    GcdProfile pr = gcd_profile(h, g.label(v3, v2));
                    if (dyadic_block(pr.d) == D && dyadic_block(pr.p) == P && dyadic_block(pr.f) == F)
                        S.push_back(v2);
                }
            }
            if (S.size() > best_S.size()) {
                best_S = std::move(S);
                best.v1 = v1;
                best.v3 = v3;
                best.handle = h;
            }
        }
    if (best_S.empty()) throw std::domain_error("extract_fork: empty fork");
    best.D = D;
    best.P = P;
    best.F = F;
    best.S = best_S;
    for (int v2 : best.S) best.member_label[v2] = g.label(best.v3, v2);
    auto profile_of = [&](int v2) { return gcd_profile(best.handle, best.member_label.at(v2)); };
    best.S_prime = pigeonhole(best.S, [&](int v2) { return profile_of(v2).d; }, best.fixed_d);
    best.S_dprime = pigeonhole(best.S_prime, [&](int v2) { return profile_of(v2).p; }, best.fixed_p);
    best.S_tprime = pigeonhole(best.S_dprime, [&](int v2) { return profile_of(v2).f; }, best.fixed_f);
    return best;
}

ForkReport fork_structure_check(const ForkChain& fork) {
    ForkReport rep;
    for (size_t i = 0; i < fork.S_dprime.size(); ++i)
        for (size_t j = i + 1; j < fork.S_dprime.size(); ++j) {
            const LabeledDiff& u = fork.member_label.at(fork.S_dprime[i]);
            const LabeledDiff& v = fork.member_label.at(fork.S_dprime[j]);
            ++rep.pairs_checked;
            Rat diff = Rat(u.a, u.q) - Rat(v.a, v.q);
            i64 m2 = u.q / fork.fixed_d;
            i64 m2p = v.q / fork.fixed_d;
            i64 bound = checked_i64((i128)(fork.fixed_d / fork.fixed_p) * m2 * m2p, "fork divisor bound");
            if (diff.num != 0 && bound % diff.den != 0) ++rep.violations;
        }
    return rep;
}

ForkNeighborCount fork_dyadic_neighbor_count(const ConfigGraph& g, const ForkChain& fork,
                                             const DyadicLevel& level1) {
    if (!level1.valid_for(g.N)) throw std::domain_error("fork_dyadic_neighbor_count: invalid level");
    ForkNeighborCount out;
    for (int u : fork.S_dprime) {
        i64 cnt = 0;
        for (int v : fork.S_dprime) {
            if (u == v) continue;
            Rat dx = (g.vertices[(size_t)u].x - g.vertices[(size_t)v].x).mod1_centered();
            Rat dt = (g.vertices[(size_t)u].t - g.vertices[(size_t)v].t).mod1_centered();
            LabeledDiff w;
            if (find_witness(dx, dt, level1, g.N, Rat(1), true, w)) ++cnt;
        }
        out.max_count = std::max(out.max_count, cnt);
    }
    double logN = std::log2((double)g.N);
    out.bound_ratio = (double)out.max_count /
                      ((double)g.N / (double)level1.pow2l() * logN * logN * logN);
    return out;
}

}  // namespace qlab
