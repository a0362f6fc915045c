#include "qlab/counting.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace qlab {

namespace {

constexpr i64 Q_GUARD_ADMISSIBLE = 1 << 10;
constexpr i64 Q_GUARD_SYSTEM = 1 << 8;
constexpr i64 BOX_GUARD = 30000000LL;

i64 modinv(i64 a, i64 m) {
    // extended Euclid; m >= 1, gcd(a, m) = 1
    i64 old_r = ((a % m) + m) % m, r = m;
    i64 old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        std::swap(old_r -= q * r, r);
        std::swap(old_s -= q * s, s);
    }
    return ((old_s % m) + m) % m;
}

bool in_block(i64 v, i64 B) { return B <= v && v < 2 * B; }

bool label_ok(i64 a, i64 q) {
    if (a > q - 1 || a < -(q - 1)) return false;
    if (q == 1) return a == 0;
    return a != 0 && gcd64(a < 0 ? -a : a, q) == 1;
}

// integers s with lo <= s/den <= hi
std::vector<i64> window_integers(const Rat& lo, const Rat& hi, i64 den) {
    std::vector<i64> out;
    Rat L = lo * Rat(den), H = hi * Rat(den);
    i64 s0 = L.floor();
    if (Rat(s0) < L) ++s0;
    for (i64 s = s0; Rat(s) <= H; ++s) out.push_back(s);
    return out;
}

// solutions (u1, u2) of u1*m2 + u2*m1 = s with |u_i| <= q_i - 1,
// parametrized by the residue class of u1 modulo m1
void crt_lifts(i64 s, i64 m1, i64 m2, i64 q1, i64 q2,
               std::vector<std::pair<i64, i64>>& out) {
    i64 r = (m1 == 1) ? 0 : (i64)(((i128)(((s % m1) + m1) % m1) * modinv(m2, m1)) % m1);
    i64 lo = -(q1 - 1);
    i64 u1 = r - ((r - lo) / m1) * m1;
    while (u1 < lo) u1 += m1;
    for (; u1 <= q1 - 1; u1 += m1) {
        i128 num = (i128)s - (i128)u1 * m2;
        if (num % m1 != 0) continue;
        i128 u2 = num / m1;
        if (u2 > q2 - 1 || u2 < -(q2 - 1)) continue;
        out.emplace_back(u1, (i64)u2);
    }
}

}  // namespace

void AdmissibleQuery::validate() const {
    if (!level.valid_for(N)) throw std::domain_error("admissible query: invalid level");
    if (level.Q > Q_GUARD_ADMISSIBLE) throw std::domain_error("admissible query: Q exceeds guard");
    if (!is_pow2(D) || !is_pow2(P) || !is_pow2(F)) throw std::domain_error("D,P,F must be powers of two");
    if (!(F <= P && P <= D && D <= 2 * level.Q)) throw std::domain_error("need F <= P <= D <= 2Q");
    if (C_t <= Rat(0) || C_x <= Rat(0)) throw std::domain_error("window constants must be positive");
}

std::vector<AdmissiblePair> enumerate_admissible(const AdmissibleQuery& query) {
    query.validate();
    const i64 Q = query.level.Q;
    const Rat Wt = query.t_window();
    const Rat Wx = query.x_window();
    std::vector<AdmissiblePair> result;
    std::vector<std::pair<i64, i64>> lifts;
    for (i64 q1 = Q; q1 < 2 * Q; ++q1) {
        for (i64 q2 = Q; q2 < 2 * Q; ++q2) {
            i64 d = gcd64(q1, q2);
            if (!in_block(d, query.D)) continue;
            i64 m1 = q1 / d, m2 = q2 / d;
            i64 den = checked_i64((i128)d * m1 * m2, "admissible denominator");
            AdmissiblePair pair;
            pair.q1 = q1;
            pair.q2 = q2;
            pair.d = d;

            // t side: s = a1*m2 + a2*m1 with |s/den - t| <= Wt
            struct ASol { i64 p; std::vector<std::pair<i64, i64>> as; };
            std::vector<ASol> asols;
            for (i64 s : window_integers(query.t - Wt, query.t + Wt, den)) {
                i64 p = (s == 0) ? den : gcd64(s < 0 ? -s : s, den);
                if (!in_block(p, query.P)) continue;
                lifts.clear();
                crt_lifts(s, m1, m2, q1, q2, lifts);
                ASol sol;
                sol.p = p;
                for (auto [a1, a2] : lifts)
                    if (label_ok(a1, q1) && label_ok(a2, q2)) sol.as.emplace_back(a1, a2);
                if (!sol.as.empty()) asols.push_back(std::move(sol));
            }
            if (asols.empty()) continue;

            // x side: the same CRT window over the b-sum, no coprimality filter
            for (i64 sb : window_integers(query.x - Wx, query.x + Wx, den)) {
                lifts.clear();
                crt_lifts(sb, m1, m2, q1, q2, lifts);
                if (lifts.empty()) continue;
                for (const ASol& sol : asols) {
                    i64 f = (sb == 0) ? sol.p : gcd64(sb < 0 ? -sb : sb, sol.p);
                    if (!in_block(f, query.F)) continue;
                    for (auto [a1, a2] : sol.as)
                        for (auto [b1, b2] : lifts)
                            pair.witnesses.push_back(Witness{a1, a2, b1, b2, f});
                }
            }
            if (pair.witnesses.empty()) continue;
            std::sort(pair.witnesses.begin(), pair.witnesses.end());
            pair.p = asols.front().p;
            result.push_back(std::move(pair));
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<AdmissiblePair> enumerate_admissible_oracle(const AdmissibleQuery& query) {
    query.validate();
    const i64 Q = query.level.Q;
    const Rat Wt = query.t_window();
    const Rat Wx = query.x_window();
    std::vector<AdmissiblePair> result;
    for (i64 q1 = Q; q1 < 2 * Q; ++q1) {
        for (i64 q2 = Q; q2 < 2 * Q; ++q2) {
            i64 d = gcd64(q1, q2);
            if (!in_block(d, query.D)) continue;
            AdmissiblePair pair;
            pair.q1 = q1;
            pair.q2 = q2;
            pair.d = d;
            i64 p_first = 0;
            for (i64 a1 = -(q1 - 1); a1 <= q1 - 1; ++a1) {
                if (!label_ok(a1, q1)) continue;
                for (i64 a2 = -(q2 - 1); a2 <= q2 - 1; ++a2) {
                    if (!label_ok(a2, q2)) continue;
                    Rat tsum = Rat(a1, q1) + Rat(a2, q2);
                    if ((tsum - query.t).abs() > Wt) continue;
                    GcdProfile g = gcd_profile(LabeledDiff{a1, 0, q1}, LabeledDiff{a2, 0, q2});
                    if (!in_block(g.p, query.P)) continue;
                    for (i64 b1 = -(q1 - 1); b1 <= q1 - 1; ++b1) {
                        for (i64 b2 = -(q2 - 1); b2 <= q2 - 1; ++b2) {
                            Rat xsum = Rat(b1, q1) + Rat(b2, q2);
                            if ((xsum - query.x).abs() > Wx) continue;
                            GcdProfile gf = gcd_profile(LabeledDiff{a1, b1, q1}, LabeledDiff{a2, b2, q2});
                            if (!in_block(gf.f, query.F)) continue;
                            pair.witnesses.push_back(Witness{a1, a2, b1, b2, gf.f});
                            if (p_first == 0) p_first = g.p;
                        }
                    }
                }
            }
            if (pair.witnesses.empty()) continue;
            std::sort(pair.witnesses.begin(), pair.witnesses.end());
            pair.p = p_first;
            result.push_back(std::move(pair));
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

std::set<i64> b_witness_set(i64 q1, i64 q2, const AdmissibleQuery& query) {
    auto pairs = enumerate_admissible(query);
    for (const auto& pair : pairs) {
        if (pair.q1 != q1 || pair.q2 != q2) continue;
        std::set<i64> out;
        for (const auto& w : pair.witnesses) out.insert(w.b1);
        return out;
    }
    throw std::invalid_argument("b_witness_set: pair is not admissible for the query");
}

i64 count_L_separated(const Rat& x, const Rat& t, const AdmissibleQuery& query) {
    AdmissibleQuery q = query;
    q.x = x;
    q.t = t;
    auto pairs = enumerate_admissible(q);
    std::vector<std::pair<Rat, Rat>> intervals;  // (hi, lo), sorted by right endpoint
    for (const auto& pair : pairs) {
        Rat w = q.C_x / Rat::make128((i128)q.level.pow2l() * pair.q1, 1);
        std::set<i64> b1s;
        for (const auto& wit : pair.witnesses) b1s.insert(wit.b1);
        for (i64 b1 : b1s) {
            Rat c(b1, pair.q1);
            intervals.emplace_back(c + w, c - w);
        }
    }
    std::sort(intervals.begin(), intervals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first || (a.first == b.first && a.second < b.second); });
    intervals.erase(std::unique(intervals.begin(), intervals.end()), intervals.end());
    // greedy 1/N-separated selection inside the intervals, left to right
    Rat step(1, q.N);
    i64 count = 0;
    bool have_prev = false;
    Rat prev;
    for (const auto& [hi, lo] : intervals) {
        Rat cand = lo;
        if (have_prev && prev + step > cand) cand = prev + step;
        if (cand <= hi) {
            ++count;
            prev = cand;
            have_prev = true;
        }
    }
    return count;
}

BoxCensus box_census(i64 N, const DyadicLevel& level, unsigned variants) {
    if (!level.valid_for(N)) throw std::domain_error("box_census: invalid level");
    const i64 Q = level.Q;
    if ((variants & CENSUS_NB) && Q > 32) throw std::domain_error("box_census: Q exceeds the N_B guard");
    if ((variants & CENSUS_SMALL_NB) && Q > 64) throw std::domain_error("box_census: Q exceeds the n_B guard");
    BoxCensus census;
    census.N = N;
    census.level = level;
    census.x_boxes = checked_i64((i128)level.pow2l() * Q, "x_boxes");
    census.t_boxes = checked_i64((i128)N * level.pow2l() * Q, "t_boxes");
    i64 nboxes = checked_i64((i128)census.x_boxes * census.t_boxes, "box count");
    if (nboxes > BOX_GUARD) throw std::domain_error("box_census: box count exceeds guard");

    auto x_index = [&](i64 num, i64 den) {
        // floor(frac(num/den) * x_boxes), exact
        i64 r = ((num % den) + den) % den;
        return (i64)((i128)r * census.x_boxes / den);
    };
    auto t_index = [&](i64 num, i64 den) {
        i64 r = ((num % den) + den) % den;
        return (i64)((i128)r * census.t_boxes / den);
    };

    std::vector<i64> NB, NBs;
    if (variants & CENSUS_NB) {
        NB.assign((size_t)nboxes, 0);
        NBs.assign((size_t)nboxes, 0);
    }
    std::vector<std::uint32_t> nB, nBs;
    std::vector<std::pair<i64, std::uint32_t>> sep_pairs;  // (box, key id)
    std::vector<std::pair<i64, i64>> keys;                 // (q1, b1) per key id
    if (variants & CENSUS_SMALL_NB) {
        nB.assign((size_t)nboxes, 0);
        nBs.assign((size_t)nboxes, 0);
    }

    std::vector<i64> a_list, b_list;
    if (variants & CENSUS_NB) {
        for (i64 q1 = Q; q1 < 2 * Q; ++q1) {
            for (i64 q2 = Q; q2 < 2 * Q; ++q2) {
                i64 den = checked_i64((i128)q1 * q2, "box denominator");
                bool coprime = gcd64(q1, q2) == 1;
                std::vector<i64> its, ixs;
                for (i64 a1 = -(q1 - 1); a1 <= q1 - 1; ++a1) {
                    if (!label_ok(a1, q1)) continue;
                    for (i64 a2 = -(q2 - 1); a2 <= q2 - 1; ++a2) {
                        if (!label_ok(a2, q2)) continue;
                        its.push_back(t_index(a1 * q2 + a2 * q1, den));
                    }
                }
                for (i64 b1 = -(q1 - 1); b1 <= q1 - 1; ++b1)
                    for (i64 b2 = -(q2 - 1); b2 <= q2 - 1; ++b2)
                        ixs.push_back(x_index(b1 * q2 + b2 * q1, den));
                for (i64 it : its) {
                    i64 base = it * census.x_boxes;
                    for (i64 ix : ixs) {
                        ++NB[(size_t)(base + ix)];
                        if (coprime) ++NBs[(size_t)(base + ix)];
                    }
                }
                census.total_tuples += (i64)its.size() * (i64)ixs.size();
            }
        }
    }

    if (variants & CENSUS_SMALL_NB) {
        std::vector<std::uint64_t> mark((size_t)(nboxes + 63) / 64, 0);
        std::vector<std::uint64_t> mark_star((size_t)(nboxes + 63) / 64, 0);
        std::vector<i64> touched;
        for (i64 q1 = Q; q1 < 2 * Q; ++q1) {
            for (i64 b1 = -(q1 - 1); b1 <= q1 - 1; ++b1) {
                std::uint32_t key_id = (std::uint32_t)keys.size();
                keys.emplace_back(q1, b1);
                touched.clear();
                for (i64 q2 = Q; q2 < 2 * Q; ++q2) {
                    i64 den = checked_i64((i128)q1 * q2, "box denominator");
                    bool coprime = gcd64(q1, q2) == 1;
                    std::vector<i64> its, ixs;
                    for (i64 a1 = -(q1 - 1); a1 <= q1 - 1; ++a1) {
                        if (!label_ok(a1, q1)) continue;
                        for (i64 a2 = -(q2 - 1); a2 <= q2 - 1; ++a2) {
                            if (!label_ok(a2, q2)) continue;
                            its.push_back(t_index(a1 * q2 + a2 * q1, den));
                        }
                    }
                    for (i64 b2 = -(q2 - 1); b2 <= q2 - 1; ++b2)
                        ixs.push_back(x_index(b1 * q2 + b2 * q1, den));
                    for (i64 it : its) {
                        i64 base = it * census.x_boxes;
                        for (i64 ix : ixs) {
                            i64 box = base + ix;
                            auto w = (size_t)(box >> 6);
                            std::uint64_t bit = 1ull << (box & 63);
                            if (!(mark[w] & bit)) {
                                mark[w] |= bit;
                                touched.push_back(box);
                            }
                            if (coprime) mark_star[w] |= bit;
                        }
                    }
                }
                for (i64 box : touched) {
                    ++nB[(size_t)box];
                    auto w = (size_t)(box >> 6);
                    std::uint64_t bit = 1ull << (box & 63);
                    if (mark_star[w] & bit) ++nBs[(size_t)box];
                    sep_pairs.emplace_back(box, key_id);
                    mark[w] &= ~bit;
                    mark_star[w] &= ~bit;
                }
            }
        }
    }

    // assemble occupied boxes
    std::unordered_map<i64, BoxCounters> occupied;
    if (variants & CENSUS_NB)
        for (i64 box = 0; box < nboxes; ++box)
            if (NB[(size_t)box] > 0) {
                auto& c = occupied[box];
                c.N_B = NB[(size_t)box];
                c.N_B_star = NBs[(size_t)box];
            }
    if (variants & CENSUS_SMALL_NB) {
        for (i64 box = 0; box < nboxes; ++box)
            if (nB[(size_t)box] > 0) {
                auto& c = occupied[box];
                c.n_B = nB[(size_t)box];
                c.n_B_star = nBs[(size_t)box];
                census.sum_n_B += c.n_B;
                census.max_n_B = std::max(census.max_n_B, c.n_B);
            }
        // 1/N-separated count of the distinct b1/q1 values per box (greedy)
        std::sort(sep_pairs.begin(), sep_pairs.end());
        size_t i = 0;
        std::vector<Rat> vals;
        while (i < sep_pairs.size()) {
            size_t j = i;
            vals.clear();
            while (j < sep_pairs.size() && sep_pairs[j].first == sep_pairs[i].first) {
                auto [q1, b1] = keys[sep_pairs[j].second];
                vals.push_back(Rat(b1, q1));
                ++j;
            }
            std::sort(vals.begin(), vals.end());
            Rat step(1, N);
            i64 cnt = 0;
            bool have = false;
            Rat prev;
            for (const Rat& v : vals) {
                if (!have || v >= prev + step) {
                    ++cnt;
                    prev = v;
                    have = true;
                }
            }
            occupied[sep_pairs[i].first].n_B_sep = cnt;
            i = j;
        }
    }
    for (auto& [box, counters] : occupied)
        census.boxes[{box % census.x_boxes, box / census.x_boxes}] = counters;
    return census;
}

namespace {

i64 count_in_window(const Rat& target, const Rat& W, i64 q, bool need_coprime) {
    // integers u with |u/q - target| <= W, |u| <= q-1, optionally gcd(u,q)=1
    Rat lo = (target - W) * Rat(q);
    Rat hi = (target + W) * Rat(q);
    i64 u0 = lo.floor();
    if (Rat(u0) < lo) ++u0;
    i64 cnt = 0;
    for (i64 u = u0; Rat(u) <= hi; ++u) {
        if (need_coprime ? !label_ok(u, q) : (u > q - 1 || u < -(q - 1))) continue;
        ++cnt;
    }
    return cnt;
}

}  // namespace

i64 count_system_solutions(const SystemQuery& query) {
    if (!query.level.valid_for(query.N)) throw std::domain_error("system query: invalid level");
    if (query.level.Q > Q_GUARD_SYSTEM) throw std::domain_error("system query: Q exceeds guard");
    const i64 Q = query.level.Q;
    const Rat Wt = query.C_t / Rat::make128((i128)query.level.pow2l() * query.N * Q, 1);
    const Rat Wx = query.C_x / Rat::make128((i128)query.level.pow2l() * Q, 1);
    if ((query.t - query.t_prime).abs() <= Wt)
        throw std::invalid_argument("system query: |t - t'| must exceed the window width");
    i64 total = 0;
    for (i64 q1 = Q; q1 < 2 * Q; ++q1) {
        std::vector<i64> partners;
        for (i64 q = Q; q < 2 * Q; ++q)
            if (gcd64(q1, q) <= query.alpha_cap) partners.push_back(q);
        // b-window counts per (partner, b1); independent of a1
        std::vector<std::vector<i64>> d2, d3;
        if (query.with_x) {
            d2.assign(partners.size(), std::vector<i64>((size_t)(2 * q1 - 1), 0));
            d3.assign(partners.size(), std::vector<i64>((size_t)(2 * q1 - 1), 0));
            for (size_t k = 0; k < partners.size(); ++k)
                for (i64 b1 = -(q1 - 1); b1 <= q1 - 1; ++b1) {
                    d2[k][(size_t)(b1 + q1 - 1)] =
                        count_in_window(Rat(b1, q1) - query.x, Wx, partners[k], false);
                    d3[k][(size_t)(b1 + q1 - 1)] =
                        count_in_window(Rat(b1, q1) - query.x_prime, Wx, partners[k], false);
                }
        }
        std::vector<i64> c2(partners.size()), c3(partners.size());
        for (i64 a1 = -(q1 - 1); a1 <= q1 - 1; ++a1) {
            if (!label_ok(a1, q1)) continue;
            i64 c2_sum = 0, c3_sum = 0;
            for (size_t k = 0; k < partners.size(); ++k) {
                c2[k] = count_in_window(Rat(a1, q1) - query.t, Wt, partners[k], true);
                c3[k] = count_in_window(Rat(a1, q1) - query.t_prime, Wt, partners[k], true);
                c2_sum += c2[k];
                c3_sum += c3[k];
            }
            if (c2_sum == 0 || c3_sum == 0) continue;
            if (!query.with_x) {
                total += c2_sum * c3_sum;
                continue;
            }
            // b2 shares q2 with a2 (and b3 with a3): couple the counts per partner
            for (i64 b1 = -(q1 - 1); b1 <= q1 - 1; ++b1) {
                i64 e2 = 0, e3 = 0;
                for (size_t k = 0; k < partners.size(); ++k) {
                    e2 += c2[k] * d2[k][(size_t)(b1 + q1 - 1)];
                    e3 += c3[k] * d3[k][(size_t)(b1 + q1 - 1)];
                }
                total += e2 * e3;
            }
        }
    }
    return total;
}

i64 count_system_solutions_oracle(const SystemQuery& query) {
    if (!query.level.valid_for(query.N)) throw std::domain_error("system query: invalid level");
    if (query.level.Q > 16) throw std::domain_error("system oracle: Q exceeds guard");
    const i64 Q = query.level.Q;
    const Rat Wt = query.C_t / Rat::make128((i128)query.level.pow2l() * query.N * Q, 1);
    const Rat Wx = query.C_x / Rat::make128((i128)query.level.pow2l() * Q, 1);
    if ((query.t - query.t_prime).abs() <= Wt)
        throw std::invalid_argument("system query: |t - t'| must exceed the window width");
    i64 total = 0;
    for (i64 q1 = Q; q1 < 2 * Q; ++q1)
        for (i64 a1 = -(q1 - 1); a1 <= q1 - 1; ++a1) {
            if (!label_ok(a1, q1)) continue;
            for (i64 q2 = Q; q2 < 2 * Q; ++q2) {
                if (gcd64(q1, q2) > query.alpha_cap) continue;
                for (i64 a2 = -(q2 - 1); a2 <= q2 - 1; ++a2) {
                    if (!label_ok(a2, q2)) continue;
                    if ((Rat(a1, q1) - Rat(a2, q2) - query.t).abs() > Wt) continue;
                    for (i64 q3 = Q; q3 < 2 * Q; ++q3) {
                        if (gcd64(q1, q3) > query.alpha_cap) continue;
                        for (i64 a3 = -(q3 - 1); a3 <= q3 - 1; ++a3) {
                            if (!label_ok(a3, q3)) continue;
                            if ((Rat(a1, q1) - Rat(a3, q3) - query.t_prime).abs() > Wt) continue;
                            if (!query.with_x) {
                                ++total;
                                continue;
                            }
                            for (i64 b1 = -(q1 - 1); b1 <= q1 - 1; ++b1)
                                for (i64 b2 = -(q2 - 1); b2 <= q2 - 1; ++b2) {
                                    if ((Rat(b1, q1) - Rat(b2, q2) - query.x).abs() > Wx) continue;
                                    for (i64 b3 = -(q3 - 1); b3 <= q3 - 1; ++b3)
                                        if ((Rat(b1, q1) - Rat(b3, q3) - query.x_prime).abs() <= Wx) ++total;
                                }
                        }
                    }
                }
            }
        }
    return total;
}

}  // namespace qlab
