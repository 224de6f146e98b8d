#pragma once

// Companion to classify.hpp: the classify() entry point and the family
// engines behind it. Included from the tail of that header at global
// scope, so everything here reopens namespace germ.

#include <functional>
#include <initializer_list>
#include <limits>
#include <type_traits>

namespace germ {

namespace classify_detail {

// ------------------------------------------------------------ small helpers

inline Mono mono2(long long a, long long b) {
    Mono m{};
    m[0] = static_cast<std::uint16_t>(a);
    m[1] = static_cast<std::uint16_t>(b);
    return m;
}

inline Mono mono3(long long a, long long b, long long c) {
    Mono m{};
    m[0] = static_cast<std::uint16_t>(a);
    m[1] = static_cast<std::uint16_t>(b);
    m[2] = static_cast<std::uint16_t>(c);
    return m;
}

// least y-exponent among terms with the given x-exponent, -1 when none
template <class K>
long long yord_at_x(const Series<K>& f, long long xe) {
    long long best = -1;
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        if (m[0] != xe) continue;
        if (best < 0 || m[1] < best) best = m[1];
    }
    return best;
}

// least x-exponent among terms with the given y-exponent, -1 when none
template <class K>
long long xord_at_y(const Series<K>& f, long long ye) {
    long long best = -1;
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        if (m[1] != ye) continue;
        if (best < 0 || m[0] < best) best = m[0];
    }
    return best;
}

// least y-exponent among terms x^xe y^j z^ze, -1 when none
template <class K>
long long slice_ord3(const Series<K>& f, long long xe, long long ze) {
    long long best = -1;
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        if (m[0] != xe || m[2] != ze) continue;
        if (best < 0 || m[1] < best) best = m[1];
    }
    return best;
}

// least exponent of variable i among terms supported on variable i alone
template <class K>
long long pure_ord(const Series<K>& f, unsigned i) {
    long long best = -1;
    for (const auto& [m, c] : f.terms()) {
        (void)c;
        bool pure = m[i] > 0;
        for (unsigned j = 0; pure && j < MAX_VARS; ++j)
            if (j != i && m[j] != 0) pure = false;
        if (!pure) continue;
        if (best < 0 || m[i] < best) best = m[i];
    }
    return best;
}

template <class K>
Series<K> homog_part(const Series<K>& f, unsigned d) {
    Series<K> out(f.F, f.R);
    for (const auto& [m, c] : f.terms())
        if (mono_deg(m) == d) out.set(m, c);
    return out;
}

template <class K>
typename K::Elem elem_pow(const K& F, const typename K::Elem& x, long long e) {
    auto base = e >= 0 ? x : F.inv(x);
    auto acc = F.one();
    for (long long k = e >= 0 ? e : -e; k > 0; k >>= 1) {
        if (k & 1) acc = F.mul(acc, base);
        base = F.mul(base, base);
    }
    return acc;
}

template <class K>
std::optional<BigRat> lift_lambda(const std::optional<typename K::Elem>& lam) {
    if (!lam) return std::nullopt;
    if constexpr (std::is_same_v<K, Rationals>) {
        return *lam;
    } else {
        return BigRat(static_cast<long long>(*lam));
    }
}

inline void absorb_log(std::vector<std::string>& dst, const std::vector<std::string>& src) {
    const size_t cap = 24;
    for (const auto& line : src) {
        if (dst.size() == cap) {
            dst.push_back("(further steps elided)");
            return;
        }
        if (dst.size() > cap) return;
        dst.push_back(line);
    }
}

inline Verdict und_logged(std::string why, std::vector<std::string> log) {
    auto v = make_undetermined(std::move(why));
    v.transform_log = std::move(log);
    return v;
}

inline Verdict mod2_logged(std::string why, std::vector<std::string> log) {
    auto v = make_mod2(std::nullopt, std::move(why));
    v.transform_log = std::move(log);
    return v;
}

// -------------------------------------------------------- modulus invariants

// The diagonal substitutions fixing the pinned slots act on the modulus
// slot through a character; when some power product of all the slot
// coefficients is fixed by every diagonal substitution and the unit, that
// product is a comparable representative of the modulus, computable
// without extracting roots. slots lists (monomial, coefficient) pairs
// with the modulus slot last; nullopt means the modulus scales freely.
template <class K>
std::optional<typename K::Elem> invariant_product(
    const K& F, unsigned nvars, const std::vector<std::pair<Mono, typename K::Elem>>& slots) {
    const size_t ns = slots.size();
    if (ns < 2) return std::nullopt;
    const unsigned nc = nvars + 1;  // unit weight plus one exponent per variable

    // want integer weights w with sum_j w_j (1, m_j) = 0 and w_last = 1;
    // rows of the linear system are indexed by the dial (u, alpha_i)
    const unsigned cols = static_cast<unsigned>(ns) - 1;
    std::vector<std::vector<BigRat>> M(nc, std::vector<BigRat>(cols + 1, BigRat(0)));
    for (unsigned e = 0; e < nc; ++e) {
        for (unsigned j = 0; j < cols; ++j)
            M[e][j] = e == 0 ? BigRat(1) : BigRat(slots[j].first[e - 1]);
        M[e][cols] = -(e == 0 ? BigRat(1) : BigRat(slots[ns - 1].first[e - 1]));
    }
    unsigned rr = 0;
    std::vector<int> pivot_row(cols, -1);
    for (unsigned c = 0; c < cols && rr < nc; ++c) {
        unsigned piv = nc;
        for (unsigned r2 = rr; r2 < nc; ++r2)
            if (M[r2][c] != 0) {
                piv = r2;
                break;
            }
        if (piv == nc) continue;
        std::swap(M[rr], M[piv]);
        BigRat d = M[rr][c];
        for (unsigned c2 = 0; c2 <= cols; ++c2) M[rr][c2] /= d;
        for (unsigned r2 = 0; r2 < nc; ++r2) {
            if (r2 == rr || M[r2][c] == 0) continue;
            BigRat mfac = M[r2][c];
            for (unsigned c2 = 0; c2 <= cols; ++c2) M[r2][c2] -= mfac * M[rr][c2];
        }
        pivot_row[c] = static_cast<int>(rr);
        ++rr;
    }
    for (unsigned r2 = rr; r2 < nc; ++r2)
        if (M[r2][cols] != 0) return std::nullopt;  // modulus slot not in the span

    std::vector<BigRat> w(ns, BigRat(0));
    w[ns - 1] = 1;
    for (unsigned c = 0; c < cols; ++c)
        if (pivot_row[c] >= 0) w[c] = M[static_cast<unsigned>(pivot_row[c])][cols];

    BigInt L = 1;
    for (const auto& x : w) {
        BigInt d = boost::multiprecision::denominator(x);
        L = L / boost::multiprecision::gcd(L, d) * d;
    }
    auto acc = F.one();
    for (size_t j = 0; j < ns; ++j) {
        BigRat scaled = w[j] * BigRat(L);
        long long e = static_cast<long long>(boost::multiprecision::numerator(scaled));
        if (e == 0) continue;
        if (F.is_zero(slots[j].second)) return std::nullopt;
        acc = F.mul(acc, elem_pow(F, slots[j].second, e));
    }
    return acc;
}

// Absolute invariant of a binary quartic with distinct roots: I^3 over the
// discriminant combination 4 I^3 - J^2. Constant on contact orbits of the
// four-line cone and computable without factoring the form.
template <class K>
std::optional<typename K::Elem> quartic_abs_invariant(const K& F, const Series<K>& j4) {
    auto a = j4.coeff(mono2(4, 0));
    auto b = j4.coeff(mono2(3, 1));
    auto c = j4.coeff(mono2(2, 2));
    auto d = j4.coeff(mono2(1, 3));
    auto e = j4.coeff(mono2(0, 4));
    auto I = F.add(F.sub(F.mul(F.from_int(12), F.mul(a, e)), F.mul(F.from_int(3), F.mul(b, d))),
                   F.mul(c, c));
    auto J = F.sub(F.sub(F.sub(F.add(F.mul(F.from_int(72), F.mul(a, F.mul(c, e))),
                                     F.mul(F.from_int(9), F.mul(b, F.mul(c, d)))),
                                F.mul(F.from_int(27), F.mul(a, F.mul(d, d)))),
                         F.mul(F.from_int(27), F.mul(e, F.mul(b, b)))),
                   F.mul(F.from_int(2), F.mul(c, F.mul(c, c))));
    auto I3 = F.mul(I, F.mul(I, I));
    auto den = F.sub(F.mul(F.from_int(4), I3), F.mul(J, J));
    if (F.is_zero(den)) return std::nullopt;  // repeated line
    return F.div(I3, den);
}

// ------------------------------------------------------- diagram completion

// When the pure-y tail is missing, the support staircase never meets the
// y-axis; the C-polytope construction still needs a point there, so the
// lowest staircase edge is extended until it does.
template <class K>
std::optional<RatPoint> y_axis_extension(const Series<K>& g) {
    std::map<long long, long long> least;
    for (const auto& [m, c] : g.terms()) {
        (void)c;
        auto it = least.find(m[0]);
        if (it == least.end() || m[1] < it->second) least[m[0]] = m[1];
    }
    std::vector<std::pair<long long, long long>> pts;
    long long besty = std::numeric_limits<long long>::max();
    for (const auto& [xe, ye] : least) {
        if (ye < besty) {
            pts.push_back({xe, ye});
            besty = ye;
        }
    }
    std::vector<std::pair<long long, long long>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            long long cross = (b.first - a.first) * (pt.second - a.second) -
                              (b.second - a.second) * (pt.first - a.first);
            if (cross <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }
    if (hull.size() < 2) return std::nullopt;
    auto [x0, y0] = hull[0];
    auto [x1, y1] = hull[1];
    BigRat yi(y0 * x1 - y1 * x0, x1 - x0);
    if (yi <= 0) return std::nullopt;
    return RatPoint{BigRat(0), yi, BigRat(0)};
}

// ------------------------------------------------------------ substitutions

// apply the 2x2 jet substitution x_i -> M[i][0] x + M[i][1] y together
// with the unit factor, truncated at cap
template <class K>
Series<K> apply_M2(const Series<K>& g, const JetType2<K>& t, unsigned cap) {
    const K& F = g.F;
    const Ring& R = g.R;
    std::vector<Series<K>> images;
    for (unsigned i = 0; i < R.n; ++i) {
        if (i < 2) {
            Series<K> im(F, R);
            im.set(R.var(0), t.M[i][0]);
            im.set(R.var(1), t.M[i][1]);
            images.push_back(im);
        } else {
            images.push_back(Series<K>::variable(F, R, i));
        }
    }
    return g.subst_trunc(images, cap + 1).scale(t.unit).jet(cap);
}

template <class K>
Series<K> apply_perm3(const Series<K>& g, const std::array<unsigned, 3>& perm) {
    Series<K> out(g.F, g.R);
    for (const auto& [m, c] : g.terms()) {
        Mono mm{};
        for (unsigned i = 0; i < 3; ++i) mm[i] = m[perm[i]];
        for (unsigned i = 3; i < MAX_VARS; ++i) mm[i] = m[i];
        out.add_term(mm, c);
    }
    return out;
}

// --------------------------------------------------------- guard and gauge

// Every claimed identification is cross-checked against a comparison
// instance: its Tjurina pair, computed from scratch, must reproduce the
// input's pair (tau is stable under the splitting, tau_ext regains one
// per split-off square). lift maps an instance from the engine's working
// frame back to the frame the input pair was computed in.
template <class K>
struct GuardCtx {
    unsigned long long tau_in = 0;
    unsigned long long taue_in = 0;
    unsigned squares = 0;
    std::function<Series<K>(const Series<K>&)> lift;
};

template <class K>
bool guard_ok(const GuardCtx<K>& G, const Series<K>& inst, std::string* why = nullptr) {
    Series<K> cmp = G.lift ? G.lift(inst) : inst;
    auto t = tau(cmp);
    if (!t.finite) {
        if (why) *why = "comparison instance has no finite Tjurina number";
        return false;
    }
    if (t.dimension != G.tau_in) {
        if (why) *why = "tau " + std::to_string(t.dimension) + " != " + std::to_string(G.tau_in);
        return false;
    }
    auto te = tau_ext(cmp);
    if (!te.finite) {
        if (why) *why = "comparison instance has no finite extended Tjurina number";
        return false;
    }
    if (te.dimension + G.squares != G.taue_in) {
        if (why)
            *why = "tau_ext " + std::to_string(te.dimension + G.squares) + " != " +
                   std::to_string(G.taue_in);
        return false;
    }
    return true;
}

template <class K>
struct GaugeResult {
    Series<K> inst;
    std::optional<typename K::Elem> lam;
    bool clean = false;
    std::vector<std::string> log;
    GaugeResult(const K& F, const Ring& R) : inst(F, R) {}
};

// Scale the unit slots to coefficient 1 where in-field roots allow. On
// success the normalized series is the guard instance and the modulus
// slot reads off the display lambda; otherwise the series is guarded as
// found, which still validates the reduction chain.
template <class K>
GaugeResult<K> gauge(const Series<K>& h, const std::vector<Mono>& unit_slots,
                     const std::optional<Mono>& lam_slot) {
    const K& F = h.F;
    GaugeResult<K> out(F, h.R);
    out.inst = h;
    std::vector<std::pair<Mono, typename K::Elem>> targets;
    bool usable = true;
    for (const auto& m : unit_slots) {
        if (F.is_zero(h.coeff(m))) {
            usable = false;
            break;
        }
        targets.push_back({m, F.one()});
    }
    if (usable) {
        try {
            auto nrm = alpha_beta_normalize(h, targets);
            out.log = nrm.log;
            if (nrm.complete) {
                out.inst = nrm.result;
                out.clean = true;
            }
        } catch (const CalcError& e) {
            if (e.code() != "ObstructedScaling") throw;
            out.log.push_back("coefficient lattice obstructed; keeping the found frame");
        }
    }
    if (lam_slot) out.lam = out.inst.coeff(*lam_slot);
    return out;
}

template <class K>
Series<K> skeleton(const Series<K>& g, const std::vector<Mono>& slots) {
    Series<K> out(g.F, g.R);
    for (const auto& m : slots) {
        auto c = g.coeff(m);
        if (!g.F.is_zero(c)) out.set(m, c);
    }
    return out;
}

// --------------------------------------------------------- row dispatching

inline Verdict fallback_scan(long long p, const std::string& base_family,
                             const Params& base_params, const std::optional<BigRat>& lam,
                             const std::string& why, std::vector<std::string> log) {
    bool ran = true;
    TableCheck chk;
    try {
        chk = check_table_conditions(base_family, base_params, p, lam);
    } catch (const CalcError&) {
        ran = false;
    }
    if (ran && !chk.unimodal && chk.witness) {
        auto v = make_mod2(chk.witness, chk.reason);
        v.transform_log = std::move(log);
        return v;
    }
    return und_logged(why, std::move(log));
}

// Evaluate the matched row; on acceptance cross-check the instance, on a
// plain rejection fall back to the base family's jet-condition scan. The
// scan conditions depend only on the jet data shared by the whole facet
// class, so a base witness certifies modality at least 2 for the germ.
template <class K>
Verdict row_then_scan(const K& F, long long p, const GuardCtx<K>& G, const std::string& family,
                      std::vector<std::pair<std::string, long long>> params,
                      const std::optional<typename K::Elem>& lam,
                      const std::optional<typename K::Elem>& lam_class, const Series<K>& inst,
                      const std::string& base_family, const Params& base_params,
                      std::vector<std::string> log) {
    Verdict v = row_verdict(F, family, params, p, lam, lam_class, log);
    if (v.kind == Verdict::Kind::Unimodal) {
        std::string why;
        if (!guard_ok(G, inst, &why))
            return und_logged("invariant cross-check failed: " + why, std::move(log));
        return v;
    }
    if (v.kind == Verdict::Kind::ModalityAtLeast2) {
        v.transform_log = std::move(log);
        return v;
    }
    if (!base_family.empty()) {
        bool ran = true;
        TableCheck chk;
        try {
            chk = check_table_conditions(base_family, base_params, p, lift_lambda<K>(lam));
        } catch (const CalcError&) {
            ran = false;
        }
        if (ran && !chk.unimodal && chk.witness) {
            auto m = make_mod2(chk.witness, chk.reason);
            m.transform_log = std::move(log);
            return m;
        }
    }
    v.transform_log = std::move(log);
    return v;
}

// ------------------------------------------------ E and Q rows over a cube

// Rows over x^3 (pre = "E") and over x^3 + yz^2 reduced to the plane
// (pre = "Q"). The regular-basis frame is finite here; after the tail
// reduction the survivors split into x y^k and y^l slots whose pattern
// picks the table row.
template <class K>
Verdict cubic_rows(const Series<K>& g, const CPolytope& P, const std::string& pre, long long p,
                   const GuardCtx<K>& G, std::vector<std::string> log) {
    const K& F = g.F;
    const Ring& R = g.R;
    const bool isQ = pre == "Q";
    const Mono m30 = mono2(3, 0);

    auto red = reduce_tail(g, P, 1024);
    absorb_log(log, red.log);
    if (!red.complete) return und_logged("tail reduction did not finish", std::move(log));
    Series<K> h = red.result;
    auto inp = initial_part(h, P);
    if (F.is_zero(inp.coeff(m30))) return und_logged("the cube left the initial part", std::move(log));
    long long ia = yord_at_x(inp, 1);
    long long ib = yord_at_x(inp, 0);

    std::vector<long long> xk, yl;
    for (const auto& [m, c] : h.terms()) {
        (void)c;
        if (!F.is_zero(inp.coeff(m))) continue;
        if (m[0] == 0) yl.push_back(m[1]);
        else if (m[0] == 1) xk.push_back(m[1]);
        else return und_logged("a survivor outside the x B(y) + C(y) window remained", std::move(log));
    }
    std::sort(xk.begin(), xk.end());
    std::sort(yl.begin(), yl.end());

    if (ia < 0 && ib >= 0) {
        // facet x^3 + y^s
        long long s = ib;
        if (xk.empty() && yl.empty()) {
            Series<K> inst = skeleton(h, {m30, mono2(0, s)});
            if (!isQ && s == 5 && p == 5)
                return und_logged("x^3 + y^5 in characteristic 5 sits outside the covered rows",
                                  std::move(log));
            if (!isQ && (s == 4 || s == 5)) {
                std::string why;
                if (!guard_ok(G, inst, &why))
                    return und_logged("invariant cross-check failed: " + why, std::move(log));
                auto v = make_simple(s == 4 ? "E_6" : "E_8");
                v.transform_log = std::move(log);
                return v;
            }
            return row_then_scan(F, p, G, pre + "_{0,s}", {{"s", s}}, std::nullopt, std::nullopt,
                                 inst, "", {}, std::move(log));
        }
        if (yl.empty() && xk.size() == 1) {
            long long k = xk[0];
            if (k == 4 && s == 5 && p == 5) {
                // only member of its range when p divides s, and there it
                // degenerates to a simple germ; the symbol carries its tau
                Series<K> inst = skeleton(h, {m30, mono2(0, s), mono2(1, k)});
                std::string why;
                if (!guard_ok(G, inst, &why))
                    return und_logged("invariant cross-check failed: " + why, std::move(log));
                Series<K> cmp = G.lift ? G.lift(inst) : inst;
                auto v = make_simple(pre.substr(0, 1) + "_" + std::to_string(tau(cmp).dimension),
                                     "exceptional member: simple in characteristic 5");
                v.transform_log = std::move(log);
                return v;
            }
            auto gp = gauge(h, {m30, mono2(0, s), mono2(1, k)}, std::nullopt);
            absorb_log(log, gp.log);
            bool primed = divides_in_char(p, 3 * k - 2 * s);
            std::string fam = pre + (primed ? "^{0'}_{r,s}" : "^0_{r,s}");
            return row_then_scan(F, p, G, fam, {{"r", k}, {"s", s}}, std::nullopt, std::nullopt,
                                 gp.inst, pre + "_{0,s}", {{"s", s}}, std::move(log));
        }
        if (yl.empty() && xk.size() == 2) {
            long long k = xk[0], l = xk[1];
            auto lam_class = invariant_product(F, R.n, {{m30, h.coeff(m30)},
                                                        {mono2(0, s), h.coeff(mono2(0, s))},
                                                        {mono2(1, l), h.coeff(mono2(1, l))},
                                                        {mono2(1, k), h.coeff(mono2(1, k))}});
            auto gp = gauge(h, {m30, mono2(0, s), mono2(1, l)}, std::optional<Mono>(mono2(1, k)));
            absorb_log(log, gp.log);
            return row_then_scan(F, p, G, pre + "^0_{k,s,l}", {{"k", k}, {"s", s}, {"l", l}},
                                 gp.lam, lam_class, gp.inst, pre + "_{0,s}", {{"s", s}},
                                 std::move(log));
        }
        return fallback_scan(p, pre + "_{0,s}", {{"s", s}}, std::nullopt,
                             "extra reduced survivors beside the one-parameter slots",
                             std::move(log));
    }

    if (ia >= 0 && ib >= 0) {
        // collinear facet x^3 + x y^{2t} + lambda y^{3t}
        if (ia % 2 != 0 || 3 * ia != 2 * ib)
            return und_logged("initial part off the collinear facet lattice", std::move(log));
        long long t = ia / 2;
        auto lam_class = invariant_product(
            F, R.n, {{m30, h.coeff(m30)}, {mono2(1, ia), h.coeff(mono2(1, ia))},
                     {mono2(0, ib), h.coeff(mono2(0, ib))}});
        auto gp = gauge(h, {m30, mono2(1, ia)}, std::optional<Mono>(mono2(0, ib)));
        absorb_log(log, gp.log);
        log.push_back("lambda read from the facet chain; its square is the scaling invariant");
        if (!xk.empty())
            return fallback_scan(p, pre + "_{2t,3t,0}", {{"t", t}}, lift_lambda<K>(gp.lam),
                                 "x-line survivors beside the chain rows", std::move(log));
        if (yl.empty()) {
            Series<K> inst = skeleton(gp.inst, {m30, mono2(1, ia), mono2(0, ib)});
            return row_then_scan(F, p, G, pre + "_{2t,3t,0}", {{"t", t}}, gp.lam, lam_class, inst,
                                 "", {}, std::move(log));
        }
        if (yl.size() == 1) {
            long long l = yl[0];
            Series<K> inst = skeleton(gp.inst, {m30, mono2(1, ia), mono2(0, ib), mono2(0, l)});
            return row_then_scan(F, p, G, pre + "_{2t,3t,l}", {{"t", t}, {"l", l}}, gp.lam,
                                 lam_class, inst, pre + "_{2t,3t,0}", {{"t", t}}, std::move(log));
        }
        return fallback_scan(p, pre + "_{2t,3t,0}", {{"t", t}}, lift_lambda<K>(gp.lam),
                             "extra reduced survivors beside the chain rows", std::move(log));
    }

    if (ia >= 0 && ib < 0) {
        // facet x^3 + x y^r
        long long r = ia;
        if (xk.empty() && yl.empty()) {
            if (!isQ && r == 3) {
                Series<K> inst = skeleton(h, {m30, mono2(1, 3)});
                std::string why;
                if (!guard_ok(G, inst, &why))
                    return und_logged("invariant cross-check failed: " + why, std::move(log));
                auto v = make_simple("E_7");
                v.transform_log = std::move(log);
                return v;
            }
            auto gp = gauge(h, {m30, mono2(1, r)}, std::nullopt);
            absorb_log(log, gp.log);
            return row_then_scan(F, p, G, pre + "_{r,0}", {{"r", r}}, std::nullopt, std::nullopt,
                                 gp.inst, "", {}, std::move(log));
        }
        if (xk.empty() && yl.size() == 1) {
            long long s = yl[0];
            auto gp = gauge(h, {m30, mono2(1, r), mono2(0, s)}, std::nullopt);
            absorb_log(log, gp.log);
            bool primed = divides_in_char(p, 3 * r - 2 * s);
            std::string fam = pre + (primed ? "^{1'}_{r,s}" : "^1_{r,s}");
            return row_then_scan(F, p, G, fam, {{"r", r}, {"s", s}}, std::nullopt, std::nullopt,
                                 gp.inst, pre + "_{r,0}", {{"r", r}}, std::move(log));
        }
        if (xk.size() == 1 && yl.size() == 1) {
            long long l = xk[0], s = yl[0];
            auto lam_class = invariant_product(F, R.n, {{m30, h.coeff(m30)},
                                                        {mono2(0, s), h.coeff(mono2(0, s))},
                                                        {mono2(1, l), h.coeff(mono2(1, l))},
                                                        {mono2(1, r), h.coeff(mono2(1, r))}});
            auto gp = gauge(h, {m30, mono2(0, s), mono2(1, l)}, std::optional<Mono>(mono2(1, r)));
            absorb_log(log, gp.log);
            return row_then_scan(F, p, G, pre + "^1_{k,s,l}", {{"k", r}, {"s", s}, {"l", l}},
                                 gp.lam, lam_class, gp.inst, pre + "_{r,0}", {{"r", r}},
                                 std::move(log));
        }
        return fallback_scan(p, pre + "_{r,0}", {{"r", r}}, std::nullopt,
                             "extra reduced survivors beside the one-parameter slots",
                             std::move(log));
    }

    return und_logged("no residual tail beside the cube", std::move(log));
}

template <class K>
Verdict cubic_engine(Series<K> g, const std::string& pre, long long p, const GuardCtx<K>& G,
                     std::vector<std::string> log) {
    const K& F = g.F;
    const Ring& R = g.R;
    unsigned cap = determinacy_tangent(g).k + 2;
    g = g.jet(cap);
    const Mono m30 = mono2(3, 0);
    auto keep = [m30](const Mono& m) { return m == m30 || m[0] <= 1; };
    auto level = [](const Mono& m) { return static_cast<long long>(mono_deg(m)); };

    for (unsigned round = 0; round < 12; ++round) {
        auto prep = reduce_graded(g, level, keep, cap, 4 * cap + 24);
        absorb_log(log, prep.log);
        if (!prep.complete)
            return und_logged("a term outside the x^3 + x B(y) + C(y) skeleton resisted reduction",
                              std::move(log));
        g = prep.result;

        long long r = yord_at_x(g, 1);
        long long s = yord_at_x(g, 0);
        if (r < 0 && s < 0) return und_logged("no residual tail beside the cube", std::move(log));

        CPolytope P = (r < 0 || (s >= 0 && 3 * r > 2 * s))
                          ? newton_diagram(g)
                          : expand_diagram(g, {RatPoint{BigRat(0), BigRat(3 * r, 2), BigRat(0)}});
        bool finite = true;
        try {
            regular_basis(F, g, P);
        } catch (const CalcError& e) {
            if (e.code() != "NotFinite") throw;
            finite = false;
        }
        if (finite) return cubic_rows(g, P, pre, p, G, std::move(log));

        // the facet cubic has a double root; push it onto the x-axis and
        // rebuild the frame
        auto inp = initial_part(g, P);
        long long a = yord_at_x(inp, 1);
        long long b = yord_at_x(inp, 0);
        auto c3 = inp.coeff(m30);
        if (F.is_zero(c3) || a < 0 || b < 0 || a % 2 != 0 || 3 * a != 2 * b)
            return und_logged("no finite frame and no double-root facet to repair", std::move(log));
        auto e1 = F.div(inp.coeff(mono2(1, a)), c3);
        auto e0 = F.div(inp.coeff(mono2(0, b)), c3);
        auto disc = F.add(F.mul(F.from_int(4), F.mul(e1, F.mul(e1, e1))),
                          F.mul(F.from_int(27), F.mul(e0, e0)));
        if (!F.is_zero(disc) || F.is_zero(e1))
            return und_logged("no finite frame and no double-root facet to repair", std::move(log));
        auto alpha = F.neg(F.div(F.mul(F.from_int(3), e0), F.mul(F.from_int(2), e1)));
        std::vector<Series<K>> images;
        Series<K> x0 = Series<K>::variable(F, R, 0);
        x0.add_term(mono2(0, a / 2), alpha);
        images.push_back(x0);
        for (unsigned i = 1; i < R.n; ++i) images.push_back(Series<K>::variable(F, R, i));
        g = g.subst_trunc(images, cap + 1).jet(cap);
        log.push_back("x := x + (" + F.to_string(alpha) + ") y^" + std::to_string(a / 2));
    }
    return und_logged("facet root shifts did not stabilize", std::move(log));
}

// ------------------------------------------------------- Z rows over x^3 y

template <class K>
Verdict z_rows(const Series<K>& g, const CPolytope& P, long long p, const GuardCtx<K>& G,
               std::vector<std::string> log) {
    const K& F = g.F;
    const Ring& R = g.R;
    const Mono m31 = mono2(3, 1);

    auto red = reduce_tail(g, P, 1024);
    absorb_log(log, red.log);
    if (!red.complete) return und_logged("tail reduction did not finish", std::move(log));
    Series<K> h = red.result;
    auto inp = initial_part(h, P);
    if (F.is_zero(inp.coeff(m31)))
        return und_logged("the cube line left the initial part", std::move(log));
    long long ia = yord_at_x(inp, 1);
    long long ib = yord_at_x(inp, 0);

    std::vector<long long> xk, yl;
    for (const auto& [m, c] : h.terms()) {
        (void)c;
        if (!F.is_zero(inp.coeff(m))) continue;
        if (m[0] == 0) yl.push_back(m[1]);
        else if (m[0] == 1) xk.push_back(m[1]);
        else return und_logged("a survivor outside the x B(y) + C(y) window remained", std::move(log));
    }
    std::sort(xk.begin(), xk.end());
    std::sort(yl.begin(), yl.end());

    if (ia < 0 && ib >= 0) {
        long long s = ib;
        if (xk.empty() && yl.empty()) {
            auto gp = gauge(h, {m31, mono2(0, s)}, std::nullopt);
            absorb_log(log, gp.log);
            return row_then_scan(F, p, G, "Z_{0,s}", {{"s", s}}, std::nullopt, std::nullopt,
                                 gp.inst, "", {}, std::move(log));
        }
        if (yl.empty() && xk.size() == 1) {
            long long k = xk[0];
            auto gp = gauge(h, {m31, mono2(0, s), mono2(1, k)}, std::nullopt);
            absorb_log(log, gp.log);
            // one row absorbs both p-cases here; the scan bound shifts inside
            return row_then_scan(F, p, G, "Z^0_{r,s}", {{"r", k}, {"s", s}}, std::nullopt,
                                 std::nullopt, gp.inst, "Z_{0,s}", {{"s", s}}, std::move(log));
        }
        if (yl.empty() && xk.size() == 2) {
            long long k = xk[0], l = xk[1];
            auto lam_class = invariant_product(F, R.n, {{m31, h.coeff(m31)},
                                                        {mono2(0, s), h.coeff(mono2(0, s))},
                                                        {mono2(1, l), h.coeff(mono2(1, l))},
                                                        {mono2(1, k), h.coeff(mono2(1, k))}});
            auto gp = gauge(h, {m31, mono2(0, s), mono2(1, l)}, std::optional<Mono>(mono2(1, k)));
            absorb_log(log, gp.log);
            return row_then_scan(F, p, G, "Z^0_{k,s,l}", {{"k", k}, {"s", s}, {"l", l}}, gp.lam,
                                 lam_class, gp.inst, "Z_{0,s}", {{"s", s}}, std::move(log));
        }
        return fallback_scan(p, "Z_{0,s}", {{"s", s}}, std::nullopt,
                             "extra reduced survivors beside the one-parameter slots",
                             std::move(log));
    }

    if (ia >= 0 && ib >= 0) {
        if (3 * ia != 2 * ib + 1)
            return und_logged("initial part off the collinear facet lattice", std::move(log));
        long long t = (ia - 1) / 2;
        auto lam_class = invariant_product(
            F, R.n, {{m31, h.coeff(m31)}, {mono2(1, ia), h.coeff(mono2(1, ia))},
                     {mono2(0, ib), h.coeff(mono2(0, ib))}});
        auto gp = gauge(h, {m31, mono2(1, ia)}, std::optional<Mono>(mono2(0, ib)));
        absorb_log(log, gp.log);
        log.push_back("lambda read from the facet chain; its square is the scaling invariant");
        if (!xk.empty())
            return fallback_scan(p, "Z_{2t,3t,0}", {{"t", t}}, lift_lambda<K>(gp.lam),
                                 "x-line survivors beside the chain rows", std::move(log));
        if (yl.empty()) {
            Series<K> inst = skeleton(gp.inst, {m31, mono2(1, ia), mono2(0, ib)});
            return row_then_scan(F, p, G, "Z_{2t,3t,0}", {{"t", t}}, gp.lam, lam_class, inst, "",
                                 {}, std::move(log));
        }
        if (yl.size() == 1) {
            long long l = yl[0];
            Series<K> inst = skeleton(gp.inst, {m31, mono2(1, ia), mono2(0, ib), mono2(0, l)});
            return row_then_scan(F, p, G, "Z_{2t,3t,l}", {{"t", t}, {"l", l}}, gp.lam, lam_class,
                                 inst, "Z_{2t,3t,0}", {{"t", t}}, std::move(log));
        }
        return fallback_scan(p, "Z_{2t,3t,0}", {{"t", t}}, lift_lambda<K>(gp.lam),
                             "extra reduced survivors beside the chain rows", std::move(log));
    }

    if (ia >= 0 && ib < 0) {
        long long r = ia;
        if (xk.empty() && yl.empty()) {
            auto gp = gauge(h, {m31, mono2(1, r)}, std::nullopt);
            absorb_log(log, gp.log);
            return row_then_scan(F, p, G, "Z_{r,0}", {{"r", r}}, std::nullopt, std::nullopt,
                                 gp.inst, "", {}, std::move(log));
        }
        if (xk.empty() && yl.size() == 1) {
            long long s = yl[0];
            auto gp = gauge(h, {m31, mono2(1, r), mono2(0, s)}, std::nullopt);
            absorb_log(log, gp.log);
            return row_then_scan(F, p, G, "Z^1_{r,s}", {{"r", r}, {"s", s}}, std::nullopt,
                                 std::nullopt, gp.inst, "Z_{r,0}", {{"r", r}}, std::move(log));
        }
        if (xk.size() == 1 && yl.size() == 1) {
            long long l = xk[0], s = yl[0];
            auto lam_class = invariant_product(F, R.n, {{m31, h.coeff(m31)},
                                                        {mono2(0, s), h.coeff(mono2(0, s))},
                                                        {mono2(1, l), h.coeff(mono2(1, l))},
                                                        {mono2(1, r), h.coeff(mono2(1, r))}});
            auto gp = gauge(h, {m31, mono2(0, s), mono2(1, l)}, std::optional<Mono>(mono2(1, r)));
            absorb_log(log, gp.log);
            return row_then_scan(F, p, G, "Z^1_{k,s,l}", {{"k", r}, {"s", s}, {"l", l}}, gp.lam,
                                 lam_class, gp.inst, "Z_{r,0}", {{"r", r}}, std::move(log));
        }
        return fallback_scan(p, "Z_{r,0}", {{"r", r}}, std::nullopt,
                             "extra reduced survivors beside the one-parameter slots",
                             std::move(log));
    }

    return und_logged("no residual tail beside the cube line", std::move(log));
}

template <class K>
Verdict z_engine(Series<K> g, long long p, const GuardCtx<K>& G, std::vector<std::string> log) {
    const K& F = g.F;
    const Ring& R = g.R;
    unsigned cap = determinacy_tangent(g).k + 2;
    g = g.jet(cap);
    const Mono m31 = mono2(3, 1);
    auto keep = [m31](const Mono& m) { return m == m31 || m[0] <= 1; };
    auto level = [](const Mono& m) { return static_cast<long long>(mono_deg(m)); };

    for (unsigned round = 0; round < 12; ++round) {
        auto prep = reduce_graded(g, level, keep, cap, 4 * cap + 24);
        absorb_log(log, prep.log);
        if (!prep.complete)
            return und_logged("a term outside the x^3 y + x B(y) + C(y) skeleton resisted reduction",
                              std::move(log));
        g = prep.result;

        long long r = yord_at_x(g, 1);
        long long s = yord_at_x(g, 0);
        if (r < 0 && s < 0)
            return und_logged("no residual tail beside the cube line", std::move(log));

        CPolytope P;
        if (r < 0 || (s >= 0 && 3 * r > 2 * s + 1)) {
            // facet through (3,1) and (0,s), extended to the x-axis
            P = expand_diagram(g, {RatPoint{BigRat(3 * s, s - 1), BigRat(0), BigRat(0)}});
        } else {
            // facet through (3,1) and (1,r), extended to both axes
            P = expand_diagram(g, {RatPoint{BigRat(0), BigRat(3 * r - 1, 2), BigRat(0)},
                                   RatPoint{BigRat(3 * r - 1, r - 1), BigRat(0), BigRat(0)}});
        }
        bool finite = true;
        try {
            regular_basis(F, g, P);
        } catch (const CalcError& e) {
            if (e.code() != "NotFinite") throw;
            finite = false;
        }
        if (finite) return z_rows(g, P, p, G, std::move(log));

        auto inp = initial_part(g, P);
        long long a = yord_at_x(inp, 1);
        long long b = yord_at_x(inp, 0);
        auto c3 = inp.coeff(m31);
        if (F.is_zero(c3) || a < 1 || b < 0 || 3 * a != 2 * b + 1)
            return und_logged("no finite frame and no double-root facet to repair", std::move(log));
        auto e1 = F.div(inp.coeff(mono2(1, a)), c3);
        auto e0 = F.div(inp.coeff(mono2(0, b)), c3);
        auto disc = F.add(F.mul(F.from_int(4), F.mul(e1, F.mul(e1, e1))),
                          F.mul(F.from_int(27), F.mul(e0, e0)));
        if (!F.is_zero(disc) || F.is_zero(e1))
            return und_logged("no finite frame and no double-root facet to repair", std::move(log));
        auto alpha = F.neg(F.div(F.mul(F.from_int(3), e0), F.mul(F.from_int(2), e1)));
        std::vector<Series<K>> images;
        Series<K> x0 = Series<K>::variable(F, R, 0);
        x0.add_term(mono2(0, (a - 1) / 2), alpha);
        images.push_back(x0);
        for (unsigned i = 1; i < R.n; ++i) images.push_back(Series<K>::variable(F, R, i));
        g = g.subst_trunc(images, cap + 1).jet(cap);
        log.push_back("x := x + (" + F.to_string(alpha) + ") y^" + std::to_string((a - 1) / 2));
    }
    return und_logged("facet root shifts did not stabilize", std::move(log));
}

// -------------------------------------------------------- W rows over x^4

template <class K>
Verdict w_engine(Series<K> g, long long p, const GuardCtx<K>& G, std::vector<std::string> log) {
    const K& F = g.F;
    unsigned cap = determinacy_tangent(g).k + 2;
    g = g.jet(cap);
    const Mono m40 = mono2(4, 0);
    auto keep = [m40](const Mono& m) { return m == m40 || m[0] <= 2; };
    auto level = [](const Mono& m) { return static_cast<long long>(mono_deg(m)); };
    auto prep = reduce_graded(g, level, keep, cap, 4 * cap + 24);
    absorb_log(log, prep.log);
    if (!prep.complete)
        return und_logged("a term outside the x^4 + x^2 A(y) + x B(y) + C(y) skeleton resisted reduction",
                          std::move(log));
    g = prep.result;

    long long al = yord_at_x(g, 2);
    long long be = yord_at_x(g, 1);
    long long ga = yord_at_x(g, 0);
    auto deep = [](long long v, long long t) { return v < 0 || v >= t; };
    if (deep(al, 4) && deep(be, 6) && deep(ga, 8))
        return mod2_logged("no residual term below the x^2 y^4, x y^6, y^8 threshold",
                           std::move(log));

    CPolytope P;
    if (ga >= 0) {
        P = newton_diagram(g);
    } else {
        auto ext = y_axis_extension(g);
        if (!ext) return und_logged("no staircase edge to extend to the y-axis", std::move(log));
        P = expand_diagram(g, {*ext});
    }
    bool finite = true;
    try {
        regular_basis(F, g, P);
    } catch (const CalcError& e) {
        if (e.code() != "NotFinite") throw;
        finite = false;
    }

    if (!finite) {
        // the quartic frame closes only away from the critical y^6 weight;
        // here the x^2 y^3 wall carries the one-parameter tail family
        if (al != 3)
            return und_logged("no finite frame against a nondegenerate weight structure",
                              std::move(log));
        auto c40 = g.coeff(m40);
        auto c23 = g.coeff(mono2(2, 3));
        auto lam_inv = F.div(F.mul(g.coeff(mono2(0, 6)), c40), F.mul(c23, c23));
        if (F.is_zero(lam_inv)) {
            long long t = ga;
            if (t < 7)
                return und_logged("the pure-y tail sits inside the quartic frame", std::move(log));
            Series<K> inst = skeleton(g, {m40, mono2(2, 3), mono2(0, t)});
            return row_then_scan(F, p, G, "W_{1,t}", {{"t", t}}, std::nullopt, std::nullopt, inst,
                                 "", {}, std::move(log));
        }
        if (F.eq(lam_inv, F.div(F.one(), F.from_int(4))))
            return und_logged("the y^6 coefficient sits on the degenerate critical value",
                              std::move(log));
        return und_logged("no finite frame against a nondegenerate weight structure",
                          std::move(log));
    }

    auto red = reduce_tail(g, P, 1024);
    absorb_log(log, red.log);
    if (!red.complete) return und_logged("tail reduction did not finish", std::move(log));
    Series<K> h = red.result;
    if (F.is_zero(h.coeff(m40)))
        return und_logged("the quartic left the reduced series", std::move(log));
    std::set<std::pair<long long, long long>> SS;
    for (const auto& [m, c] : h.terms()) {
        (void)c;
        if (m == m40) continue;
        SS.insert({m[0], m[1]});
    }
    auto is = [&SS](std::initializer_list<std::pair<long long, long long>> want) {
        return SS == std::set<std::pair<long long, long long>>(want);
    };
    std::string fam;
    if (is({{0, 5}})) fam = "W_12";
    else if (is({{2, 3}, {0, 5}})) fam = "W_12'";
    else if (is({{1, 4}})) fam = "W_13";
    else if (is({{1, 4}, {0, 6}})) fam = "W_13'";
    else if (is({{2, 3}, {0, 6}})) fam = "W_{1,0}";
    else if (is({{2, 3}, {0, 6}, {0, 7}})) fam = "W_{1,0}'";
    else if (is({{0, 6}})) fam = "W^#_{1,0}";
    else if (is({{2, 4}, {0, 6}})) fam = "W^{#'}_{1,0}";
    else if (is({{1, 5}})) fam = "W_17";
    else if (is({{1, 5}, {0, 7}})) fam = "W_17'";
    else if (is({{1, 5}, {0, 8}})) fam = "W_17''";
    else if (is({{0, 7}})) fam = "W_18";
    else if (is({{0, 7}, {2, 4}})) fam = "W_18'";
    else if (is({{0, 7}, {2, 5}})) fam = "W_18''";
    else if (SS.size() == 2 && SS.count({2, 3})) {
        // x^2 y^3 wall with a deep pure-y tail; the one-parameter t-chain
        auto other = *SS.begin() == std::make_pair(2LL, 3LL) ? *SS.rbegin() : *SS.begin();
        if (other.first == 0 && other.second >= 7) {
            Series<K> inst = skeleton(h, {m40, mono2(2, 3), mono2(0, other.second)});
            return row_then_scan(F, p, G, "W_{1,t}", {{"t", other.second}}, std::nullopt,
                                 std::nullopt, inst, "", {}, std::move(log));
        }
        return und_logged("reduced support matches no quartic row", std::move(log));
    }
    else return und_logged("reduced support matches no quartic row", std::move(log));

    std::optional<typename K::Elem> lam, lam_class;
    if (fam == "W_{1,0}" || fam == "W_{1,0}'") {
        // y^6 coefficient after scaling the corners to 1; the power
        // product form needs no roots
        auto c40 = h.coeff(m40);
        auto c23 = h.coeff(mono2(2, 3));
        lam = F.div(F.mul(h.coeff(mono2(0, 6)), c40), F.mul(c23, c23));
        lam_class = lam;
    }
    return row_then_scan(F, p, G, fam, {}, lam, lam_class, h, "", {}, std::move(log));
}

// ------------------------------------------- S rows over x^2 z + y z^2

template <class K>
Verdict s_engine(Series<K> g, long long p, const GuardCtx<K>& G, std::vector<std::string> log) {
    const K& F = g.F;
    const Ring& R = g.R;
    unsigned cap = determinacy_tangent(g).k + 2;
    g = g.jet(cap);
    const Mono mxz = mono3(2, 0, 1), myz = mono3(0, 1, 2);
    {
        auto nrm = gauge(g, {mxz, myz}, std::nullopt);
        absorb_log(log, nrm.log);
        g = nrm.inst;
    }
    auto keep = [mxz, myz](const Mono& m) {
        return m == mxz || m == myz || (m[2] == 0 && m[0] <= 2);
    };
    auto level = [](const Mono& m) { return static_cast<long long>(mono_deg(m)); };
    auto prep = reduce_graded(g, level, keep, cap, 4 * cap + 24);
    absorb_log(log, prep.log);
    if (!prep.complete)
        return und_logged("a term outside the pinch skeleton resisted reduction", std::move(log));
    g = prep.result;

    long long rr = slice_ord3(g, 2, 0);  // x^2 y^r
    long long ss = slice_ord3(g, 1, 0);  // x y^s
    long long tt = slice_ord3(g, 0, 0);  // y^t
    auto mk = [&](std::initializer_list<std::pair<Mono, typename K::Elem>> tail) {
        Series<K> inst(F, R);
        inst.set(mxz, g.coeff(mxz));
        inst.set(myz, g.coeff(myz));
        for (const auto& [m, c] : tail) inst.set(m, c);
        return inst;
    };

    if (ss == 3)
        return row_then_scan(F, p, G, "S_12", {}, std::nullopt, std::nullopt,
                             mk({{mono3(1, 3, 0), F.one()}}), "", {}, std::move(log));
    if (tt == 4) {
        if (rr == 2) {
            auto lam = g.coeff(mono3(2, 2, 0));
            auto lc = invariant_product(F, R.n, {{mxz, g.coeff(mxz)}, {myz, g.coeff(myz)},
                                                 {mono3(0, 4, 0), g.coeff(mono3(0, 4, 0))},
                                                 {mono3(2, 2, 0), lam}});
            if (!lc) log.push_back("the x^2 y^2 coefficient scales freely; reported as found");
            return row_then_scan(F, p, G, "S_11'", {}, std::optional<typename K::Elem>(lam),
                                 lc ? lc : std::optional<typename K::Elem>(F.one()),
                                 mk({{mono3(0, 4, 0), g.coeff(mono3(0, 4, 0))},
                                     {mono3(2, 2, 0), lam}}),
                                 "", {}, std::move(log));
        }
        return row_then_scan(F, p, G, "S_11", {}, std::nullopt, std::nullopt,
                             mk({{mono3(0, 4, 0), F.one()}}), "", {}, std::move(log));
    }
    if (tt == 5) {
        if (rr == 2) {
            auto lam_class = invariant_product(F, R.n, {{mxz, g.coeff(mxz)}, {myz, g.coeff(myz)},
                                                        {mono3(2, 2, 0), g.coeff(mono3(2, 2, 0))},
                                                        {mono3(0, 5, 0), g.coeff(mono3(0, 5, 0))}});
            auto gp = gauge(g, {mxz, myz, mono3(2, 2, 0)}, std::optional<Mono>(mono3(0, 5, 0)));
            absorb_log(log, gp.log);
            Series<K> inst1 = skeleton(gp.inst, {mxz, myz, mono3(2, 2, 0), mono3(0, 5, 0)});
            std::string why;
            if (guard_ok(G, inst1, &why))
                return row_then_scan(F, p, G, "S_{1,0}", {}, gp.lam, lam_class, inst1, "", {},
                                     std::move(log));
            auto c6 = gp.inst.coeff(mono3(0, 6, 0));
            if (!F.is_zero(c6)) {
                Series<K> inst2 = inst1;
                inst2.set(mono3(0, 6, 0), c6);
                if (guard_ok(G, inst2, &why))
                    return row_then_scan(F, p, G, "S^1_{1,0}", {}, gp.lam, lam_class, inst2, "",
                                         {}, std::move(log));
            }
            return und_logged("the y^5 frame fits neither the plain nor the extended row",
                              std::move(log));
        }
        if (rr == 3)
            return row_then_scan(F, p, G, "S^4_{1,0}", {}, std::nullopt, std::nullopt,
                                 mk({{mono3(2, 3, 0), F.one()}, {mono3(0, 5, 0), F.one()}}), "",
                                 {}, std::move(log));
        return row_then_scan(F, p, G, "S^3_{1,0}", {}, std::nullopt, std::nullopt,
                             mk({{mono3(0, 5, 0), F.one()}}), "", {}, std::move(log));
    }
    if (ss == 4) {
        if (rr == 2)
            return row_then_scan(F, p, G, "S^2_{1,0}", {}, std::nullopt, std::nullopt,
                                 mk({{mono3(2, 2, 0), F.one()}, {mono3(1, 4, 0), F.one()}}), "",
                                 {}, std::move(log));
        if (tt == 6)
            return row_then_scan(F, p, G, "S_16'", {}, std::nullopt, std::nullopt,
                                 mk({{mono3(1, 4, 0), F.one()}, {mono3(0, 6, 0), F.one()}}), "",
                                 {}, std::move(log));
        if (tt == 7)
            return row_then_scan(F, p, G, "S_16''", {}, std::nullopt, std::nullopt,
                                 mk({{mono3(1, 4, 0), F.one()}, {mono3(0, 7, 0), F.one()}}), "",
                                 {}, std::move(log));
        return row_then_scan(F, p, G, "S_16", {}, std::nullopt, std::nullopt,
                             mk({{mono3(1, 4, 0), F.one()}}), "", {}, std::move(log));
    }
    if (rr == 2) {
        if (tt >= 6 && (ss < 0 || tt < ss + 2)) {
            long long sparam = ss < 0 ? tt : ss;
            if (ss < 0) log.push_back("the x y^s slot is empty; s reported as t");
            return row_then_scan(F, p, G, "S_{1,0,t}", {{"t", tt}, {"s", sparam}}, std::nullopt,
                                 std::nullopt,
                                 mk({{mono3(2, 2, 0), g.coeff(mono3(2, 2, 0))},
                                     {mono3(0, tt, 0), F.one()}}),
                                 "", {}, std::move(log));
        }
        if (ss >= 5 && (tt < 0 || tt > 2 * ss - 3)) {
            long long tparam = tt < 0 ? 2 * ss - 2 : tt;
            if (tt < 0) log.push_back("the y^t slot is empty; t reported at the family boundary");
            return row_then_scan(F, p, G, "S_{1,s,0}", {{"s", ss}, {"t", tparam}}, std::nullopt,
                                 std::nullopt,
                                 mk({{mono3(2, 2, 0), g.coeff(mono3(2, 2, 0))},
                                     {mono3(1, ss, 0), F.one()}}),
                                 "", {}, std::move(log));
        }
        if (ss >= 5 && tt >= ss + 2 && tt <= 2 * ss - 3) {
            auto lam_class = invariant_product(
                F, R.n, {{mxz, g.coeff(mxz)}, {myz, g.coeff(myz)},
                         {mono3(2, 2, 0), g.coeff(mono3(2, 2, 0))},
                         {mono3(1, ss, 0), g.coeff(mono3(1, ss, 0))},
                         {mono3(0, tt, 0), g.coeff(mono3(0, tt, 0))}});
            auto gp = gauge(g, {mxz, myz, mono3(2, 2, 0), mono3(1, ss, 0)},
                            std::optional<Mono>(mono3(0, tt, 0)));
            absorb_log(log, gp.log);
            Series<K> inst = skeleton(
                gp.inst, {mxz, myz, mono3(2, 2, 0), mono3(1, ss, 0), mono3(0, tt, 0)});
            return row_then_scan(F, p, G, "S_{1,s,t}", {{"s", ss}, {"t", tt}}, gp.lam, lam_class,
                                 inst, "", {}, std::move(log));
        }
        return und_logged("the x^2 y^2 frame matches no pinch row", std::move(log));
    }
    if (tt == 6) {
        if (rr == 3)
            return row_then_scan(F, p, G, "S_17'", {}, std::nullopt, std::nullopt,
                                 mk({{mono3(2, 3, 0), F.one()}, {mono3(0, 6, 0), F.one()}}), "",
                                 {}, std::move(log));
        if (rr == 4)
            return row_then_scan(F, p, G, "S_17''", {}, std::nullopt, std::nullopt,
                                 mk({{mono3(2, 4, 0), F.one()}, {mono3(0, 6, 0), F.one()}}), "",
                                 {}, std::move(log));
        return row_then_scan(F, p, G, "S_17", {}, std::nullopt, std::nullopt,
                             mk({{mono3(0, 6, 0), F.one()}}), "", {}, std::move(log));
    }
    if ((ss < 0 || ss >= 5) && (tt < 0 || tt >= 7))
        return mod2_logged("no residual term below the x^2 y^3, x y^5, y^7 threshold",
                           std::move(log));
    return und_logged("residual pattern matches no pinch row", std::move(log));
}

// ------------------------------------------- U rows over x^3 + x z^2

template <class K>
Verdict u_engine(Series<K> g, long long p, const GuardCtx<K>& G, std::vector<std::string> log) {
    const K& F = g.F;
    const Ring& R = g.R;
    unsigned cap = determinacy_tangent(g).k + 2;
    g = g.jet(cap);
    const Mono m300 = mono3(3, 0, 0), m102 = mono3(1, 0, 2);
    {
        auto nrm = gauge(g, {m300, m102}, std::nullopt);
        absorb_log(log, nrm.log);
        g = nrm.inst;
    }
    auto keep = [m300, m102](const Mono& m) {
        return m == m300 || m == m102 || (m[2] == 0 && m[0] <= 2) || (m[2] == 1 && m[0] == 0);
    };
    auto level = [](const Mono& m) { return static_cast<long long>(mono_deg(m)); };
    auto prep = reduce_graded(g, level, keep, cap, 4 * cap + 24);
    absorb_log(log, prep.log);
    if (!prep.complete)
        return und_logged("a term outside the handle skeleton resisted reduction", std::move(log));
    g = prep.result;

    long long a1 = slice_ord3(g, 0, 0);  // y^a
    long long a2 = slice_ord3(g, 1, 0);  // x y^a
    long long a3 = slice_ord3(g, 2, 0);  // x^2 y^a
    long long a4 = slice_ord3(g, 0, 1);  // y^a z
    auto mk = [&](std::initializer_list<std::pair<Mono, typename K::Elem>> tail) {
        Series<K> inst(F, R);
        inst.set(m300, g.coeff(m300));
        inst.set(m102, g.coeff(m102));
        for (const auto& [m, c] : tail) inst.set(m, c);
        return inst;
    };

    if (a1 == 4) {
        if (a3 == 2)
            return row_then_scan(F, p, G, "U_12'", {}, std::nullopt, std::nullopt,
                                 mk({{mono3(0, 4, 0), F.one()}, {mono3(2, 2, 0), F.one()}}), "",
                                 {}, std::move(log));
        return row_then_scan(F, p, G, "U_12", {}, std::nullopt, std::nullopt,
                             mk({{mono3(0, 4, 0), F.one()}}), "", {}, std::move(log));
    }
    if (a2 == 3 && a4 == 3) {
        auto lam_class = invariant_product(F, R.n, {{m300, g.coeff(m300)}, {m102, g.coeff(m102)},
                                                    {mono3(1, 3, 0), g.coeff(mono3(1, 3, 0))},
                                                    {mono3(0, 3, 1), g.coeff(mono3(0, 3, 1))}});
        if (lam_class && F.eq(*lam_class, F.neg(F.one())))
            return und_logged("the y^3 z slot sits on the degenerate square value",
                              std::move(log));
        auto gp = gauge(g, {m300, m102, mono3(1, 3, 0)}, std::optional<Mono>(mono3(0, 3, 1)));
        absorb_log(log, gp.log);
        Series<K> inst1 = skeleton(gp.inst, {m300, m102, mono3(1, 3, 0), mono3(0, 3, 1)});
        std::string why;
        if (guard_ok(G, inst1, &why))
            return row_then_scan(F, p, G, "U_{1,0}", {}, gp.lam, lam_class, inst1, "", {},
                                 std::move(log));
        auto c41 = gp.inst.coeff(mono3(0, 4, 1));
        if (!F.is_zero(c41)) {
            Series<K> inst2 = inst1;
            inst2.set(mono3(0, 4, 1), c41);
            if (guard_ok(G, inst2, &why))
                return row_then_scan(F, p, G, "U_{1,0}'", {}, gp.lam, lam_class, inst2, "", {},
                                     std::move(log));
        }
        return und_logged("the y^3 z frame fits neither the plain nor the extended row",
                          std::move(log));
    }
    if (a4 == 3) {
        if (a2 == 4)
            return row_then_scan(F, p, G, "U_*'", {}, std::nullopt, std::nullopt,
                                 mk({{mono3(0, 3, 1), F.one()}, {mono3(1, 4, 0), F.one()}}), "",
                                 {}, std::move(log));
        return row_then_scan(F, p, G, "U_*", {}, std::nullopt, std::nullopt,
                             mk({{mono3(0, 3, 1), F.one()}}), "", {}, std::move(log));
    }
    if (a2 == 3) {
        if (a4 < 4)
            return und_logged("an x y^3 slot with no z-line partner matches no handle row",
                              std::move(log));
        return row_then_scan(F, p, G, "U_{1,t}", {{"t", a4}}, std::nullopt, std::nullopt,
                             mk({{mono3(1, 3, 0), F.one()}, {mono3(0, a4, 1), F.one()}}), "", {},
                             std::move(log));
    }
    if (a1 == 5) {
        if (a3 == 3)
            return row_then_scan(F, p, G, "U_16'", {}, std::nullopt, std::nullopt,
                                 mk({{mono3(2, 3, 0), F.one()}, {mono3(0, 5, 0), F.one()}}), "",
                                 {}, std::move(log));
        return row_then_scan(F, p, G, "U_16", {}, std::nullopt, std::nullopt,
                             mk({{mono3(0, 5, 0), F.one()}}), "", {}, std::move(log));
    }
    if ((a1 < 0 || a1 >= 6) && (a2 < 0 || a2 >= 4) && (a4 < 0 || a4 >= 4))
        return mod2_logged("no residual term below the y^6, x y^4, y^4 z threshold",
                           std::move(log));
    return und_logged("residual pattern matches no handle row", std::move(log));
}

// ----------------------------------------------------- corank 3 dispatch

template <class K>
Verdict t333(const Series<K>& g, const JetMatch3<K>& jm, long long p, const GuardCtx<K>& G,
             std::vector<std::string> log) {
    const K& F = g.F;
    if (!jm.lambda_ok)
        return und_logged("the diagonal cubic is degenerate: lambda^3 = -27", std::move(log));
    auto j3 = homog_part(g, 3);
    auto c111 = j3.coeff(mono3(1, 1, 1));
    auto prod = F.mul(j3.coeff(mono3(3, 0, 0)),
                      F.mul(j3.coeff(mono3(0, 3, 0)), j3.coeff(mono3(0, 0, 3))));
    auto lam3 = F.div(F.mul(c111, F.mul(c111, c111)), prod);
    auto root = kth_root_in_field(F, lam3, 3);
    if (!root) {
        std::string why;
        if (!guard_ok(G, j3, &why))
            return und_logged("invariant cross-check failed: " + why, std::move(log));
        log.push_back("lambda reported as its cube; no cube root in the base field");
        auto v = make_unimodal(F, "T_{3,3,3}", {}, std::optional<typename K::Elem>(lam3),
                               std::optional<typename K::Elem>(lam3), std::move(log));
        return v;
    }
    return row_then_scan(F, p, G, "T_{3,3,3}", {}, std::optional<typename K::Elem>(*root),
                         std::optional<typename K::Elem>(lam3), j3, "", {}, std::move(log));
}

template <class K>
Verdict t_rst(Series<K> g, long long p, const GuardCtx<K>& G, std::vector<std::string> log) {
    const K& F = g.F;
    const Ring& R = g.R;
    unsigned cap = determinacy_tangent(g).k + 2;
    g = g.jet(cap);
    const Mono mc = mono3(1, 1, 1);
    auto keep = [mc](const Mono& m) {
        if (m == mc) return true;
        unsigned nz = 0;
        for (unsigned i = 0; i < 3; ++i)
            if (m[i] > 0) ++nz;
        return nz <= 1;
    };
    auto level = [](const Mono& m) { return static_cast<long long>(mono_deg(m)); };
    auto prep = reduce_graded(g, level, keep, cap, 4 * cap + 24);
    absorb_log(log, prep.log);
    if (!prep.complete)
        return und_logged("a term outside the cross skeleton resisted reduction", std::move(log));
    g = prep.result;
    if (F.is_zero(g.coeff(mc)))
        return und_logged("the cross term left the reduced series", std::move(log));
    long long ax = pure_ord(g, 0), ay = pure_ord(g, 1), az = pure_ord(g, 2);
    if (ax < 0 || ay < 0 || az < 0)
        return und_logged("a pure power is missing from the cross frame", std::move(log));
    if (ax == 3 && ay == 3 && az == 3)
        return und_logged("three pure cubes against a cross term belong to the diagonal family",
                          std::move(log));
    std::vector<Mono> slots = {mc, mono3(ax, 0, 0), mono3(0, ay, 0), mono3(0, 0, az)};
    auto gp = gauge(g, slots, std::nullopt);
    absorb_log(log, gp.log);
    Series<K> inst = skeleton(gp.inst, slots);
    std::array<long long, 3> ords{ax, ay, az};
    std::sort(ords.begin(), ords.end());
    return row_then_scan(F, p, G, "T_{r,s,t}", {{"r", ords[0]}, {"s", ords[1]}, {"t", ords[2]}},
                         std::nullopt, std::nullopt, inst, "", {}, std::move(log));
}

template <class K>
Verdict q_path(Series<K> g, const JetMatch3<K>& jm, long long p, const GuardCtx<K>& G,
               std::vector<std::string> log) {
    const K& F = g.F;
    g = apply_perm3(g, jm.perm);
    const Ring R3 = g.R;
    unsigned cap = determinacy_tangent(g).k + 2;
    g = g.jet(cap);
    const Mono m300 = mono3(3, 0, 0), m012 = mono3(0, 1, 2);
    {
        auto nrm = gauge(g, {m300, m012}, std::nullopt);
        absorb_log(log, nrm.log);
        g = nrm.inst;
    }
    auto keep = [m300, m012](const Mono& m) {
        return m == m300 || m == m012 || (m[2] == 0 && m[0] <= 1);
    };
    auto level = [](const Mono& m) { return static_cast<long long>(mono_deg(m)); };
    auto prep = reduce_graded(g, level, keep, cap, 4 * cap + 24);
    absorb_log(log, prep.log);
    if (!prep.complete)
        return und_logged("a term outside the cube and Whitney skeleton resisted reduction",
                          std::move(log));
    g = prep.result;

    auto qc = g.coeff(m012);
    // the Whitney pair decouples; classify the plane part over the cube
    // and lift every comparison instance back through y z^2
    Ring R2 = Ring::standard(2);
    Series<K> g2(F, R2);
    for (const auto& [m, c] : g.terms()) {
        if (m == m012) continue;
        if (m[2] != 0)
            return und_logged("a z-term beside the Whitney pair survived reduction",
                              std::move(log));
        g2.set(mono2(m[0], m[1]), c);
    }
    GuardCtx<K> G2 = G;
    auto lift0 = G.lift;
    auto Fv = F;
    G2.lift = [Fv, R3, qc, lift0](const Series<K>& inst2) {
        Series<K> out(Fv, R3);
        for (const auto& [m, c] : inst2.terms()) out.set(mono3(m[0], m[1], 0), c);
        out.set(mono3(0, 1, 2), qc);
        return lift0 ? lift0(out) : out;
    };
    return cubic_engine(std::move(g2), "Q", p, G2, std::move(log));
}

template <class K>
Verdict corank3(Series<K> g, long long p, const GuardCtx<K>& G, std::vector<std::string> log) {
    if (*g.order() >= 4)
        return mod2_logged("corank 3 with a quartic or deeper jet lies beyond the unimodal strata",
                           std::move(log));
    auto j3 = homog_part(g, 3);
    auto jm = jet_match_3(j3);
    switch (jm.tag) {
        case Jet3Tag::DiagonalCubic:
            return t333(g, jm, p, G, std::move(log));
        case Jet3Tag::TwoCubesCross:
        case Jet3Tag::OneCubeCross:
        case Jet3Tag::Cross:
            return t_rst(std::move(g), p, G, std::move(log));
        case Jet3Tag::CubeWhitney:
            return q_path(std::move(g), jm, p, G, std::move(log));
        case Jet3Tag::Pinch:
            return s_engine(apply_perm3(g, jm.perm), p, G, std::move(log));
        case Jet3Tag::CubeHandle:
            return u_engine(apply_perm3(g, jm.perm), p, G, std::move(log));
        case Jet3Tag::SquareLine:
            return mod2_logged("the cubic cone is a square times a line; beyond the unimodal strata",
                               std::move(log));
        case Jet3Tag::TripleLine:
            return mod2_logged("the cubic cone is a triple line; beyond the unimodal strata",
                               std::move(log));
        case Jet3Tag::NoMatch:
        default:
            return und_logged("cubic cone not reducible to a table shape by permutation and scaling",
                              std::move(log));
    }
}

// ----------------------------------------------------- corank 2 dispatch

template <class K>
Verdict corank2(Series<K> g, long long p, const GuardCtx<K>& G, std::vector<std::string> log) {
    const K& F = g.F;
    const Ring& R = g.R;
    unsigned ord = *g.order();

    if (ord == 3) {
        auto j3 = homog_part(g, 3);
        auto t = jet_type_2(j3, 3);
        using Tag = typename JetType2<K>::Tag;
        if (t.tag == Tag::Cubic3) {
            if (!t.have_subst)
                return und_logged(t.note.empty() ? "the triple line is not split over the base field"
                                                 : t.note,
                                  std::move(log));
            unsigned cap = determinacy_tangent(g).k + 2;
            return cubic_engine(apply_M2(g, t, cap), "E", p, G, std::move(log));
        }
        if (t.tag == Tag::Cubic21) {
            if (!t.have_subst)
                return und_logged(t.note.empty() ? "the double line is not split over the base field"
                                                 : t.note,
                                  std::move(log));
            unsigned cap = determinacy_tangent(g).k + 2;
            auto g2 = apply_M2(g, t, cap);
            auto keep = [](const Mono& m) { return (m[0] == 2 && m[1] == 1) || m[0] == 0; };
            auto level = [](const Mono& m) { return static_cast<long long>(mono_deg(m)); };
            auto prep = reduce_graded(g2, level, keep, cap, 4 * cap + 24);
            absorb_log(log, prep.log);
            if (!prep.complete)
                return und_logged("a term outside the x^2 y + C(y) skeleton resisted reduction",
                                  std::move(log));
            g2 = prep.result;
            long long q = yord_at_x(g2, 0);
            if (q < 0) return und_logged("no pure power beside x^2 y", std::move(log));
            Series<K> inst(F, R);
            inst.set(mono2(2, 1), F.one());
            inst.set(mono2(0, q), F.one());
            std::string why;
            if (!guard_ok(G, inst, &why))
                return und_logged("invariant cross-check failed: " + why, std::move(log));
            auto v = make_simple("D_" + std::to_string(q + 1));
            v.transform_log = std::move(log);
            return v;
        }
        // three distinct concurrent lines
        Series<K> inst(F, R);
        inst.set(mono2(2, 1), F.one());
        inst.set(mono2(1, 2), F.one());
        std::string why;
        if (!guard_ok(G, inst, &why))
            return und_logged("invariant cross-check failed: " + why, std::move(log));
        auto v = make_simple("D_4");
        v.transform_log = std::move(log);
        return v;
    }

    if (ord == 4) {
        auto j4 = homog_part(g, 4);
        // the diagonal quartic needs no line splitting
        bool diag = true;
        for (const auto& [m, c] : j4.terms()) {
            (void)c;
            bool slot = (m[0] == 4 && m[1] == 0) || (m[0] == 2 && m[1] == 2) ||
                        (m[0] == 0 && m[1] == 4);
            if (!slot) diag = false;
        }
        auto c40 = j4.coeff(mono2(4, 0));
        auto c22 = j4.coeff(mono2(2, 2));
        auto c04 = j4.coeff(mono2(0, 4));
        if (diag && !F.is_zero(c40) && !F.is_zero(c04) &&
            !F.is_zero(F.sub(F.mul(c22, c22), F.mul(F.from_int(4), F.mul(c40, c04))))) {
            auto lam_class = quartic_abs_invariant(F, j4);
            if (!lam_class)
                return und_logged("the quartic cone carries a repeated line", std::move(log));
            auto gp = gauge(j4, {mono2(4, 0), mono2(0, 4)}, std::optional<Mono>(mono2(2, 2)));
            absorb_log(log, gp.log);
            return row_then_scan(F, p, G, "T_{4,4,2}", {}, gp.lam, lam_class, j4, "", {},
                                 std::move(log));
        }
        auto t = jet_type_2(j4, 4);
        using Tag = typename JetType2<K>::Tag;
        unsigned cap = determinacy_tangent(g).k + 2;
        switch (t.tag) {
            case Tag::Quartic4:
                if (!t.have_subst)
                    return und_logged(t.note.empty() ? "the quadruple line is not split over the base field"
                                                     : t.note,
                                      std::move(log));
                return w_engine(apply_M2(g, t, cap), p, G, std::move(log));
            case Tag::Quartic31:
                if (!t.have_subst)
                    return und_logged(t.note.empty() ? "the triple line is not split over the base field"
                                                     : t.note,
                                      std::move(log));
                return z_engine(apply_M2(g, t, cap), p, G, std::move(log));
            case Tag::Quartic22: {
                if (!t.have_subst)
                    return und_logged(t.note.empty() ? "the double lines are conjugate over the base field"
                                                     : t.note,
                                      std::move(log));
                auto g2 = apply_M2(g, t, cap);
                auto keep = [](const Mono& m) {
                    return (m[0] == 2 && m[1] == 2) || m[0] == 0 || m[1] == 0;
                };
                auto level = [](const Mono& m) { return static_cast<long long>(mono_deg(m)); };
                auto prep = reduce_graded(g2, level, keep, cap, 4 * cap + 24);
                absorb_log(log, prep.log);
                if (!prep.complete)
                    return und_logged("a term outside the double-pair skeleton resisted reduction",
                                      std::move(log));
                g2 = prep.result;
                long long r = xord_at_y(g2, 0);
                long long s = yord_at_x(g2, 0);
                if (r < 0 || s < 0)
                    return und_logged("a pure power is missing beside the double pair",
                                      std::move(log));
                std::vector<Mono> slots = {mono2(2, 2), mono2(r, 0), mono2(0, s)};
                auto gp = gauge(g2, slots, std::nullopt);
                absorb_log(log, gp.log);
                Series<K> inst = skeleton(gp.inst, slots);
                if (r > s) std::swap(r, s);
                return row_then_scan(F, p, G, "T_{r,s,2}", {{"r", r}, {"s", s}}, std::nullopt,
                                     std::nullopt, inst, "", {}, std::move(log));
            }
            case Tag::Quartic211: {
                if (!t.have_subst)
                    return und_logged(t.note.empty() ? "the line pattern is not split over the base field"
                                                     : t.note,
                                      std::move(log));
                auto g2 = apply_M2(g, t, cap);
                auto keep = [](const Mono& m) {
                    return (m[0] == 3 && m[1] == 1) || (m[0] == 2 && m[1] == 2) || m[0] == 0;
                };
                auto level = [](const Mono& m) { return static_cast<long long>(mono_deg(m)); };
                auto prep = reduce_graded(g2, level, keep, cap, 4 * cap + 24);
                absorb_log(log, prep.log);
                if (!prep.complete)
                    return und_logged("a term outside the x^3 y + x^2 y^2 + C(y) skeleton resisted reduction",
                                      std::move(log));
                g2 = prep.result;
                long long s = yord_at_x(g2, 0);
                if (s < 0)
                    return und_logged("no pure power beside the mixed quartic", std::move(log));
                std::vector<Mono> slots = {mono2(3, 1), mono2(2, 2), mono2(0, s)};
                auto gp = gauge(g2, slots, std::nullopt);
                absorb_log(log, gp.log);
                Series<K> inst = skeleton(gp.inst, slots);
                return row_then_scan(F, p, G, "T_{4,s,2}", {{"s", s}}, std::nullopt, std::nullopt,
                                     inst, "", {}, std::move(log));
            }
            case Tag::Quartic1111:
            default: {
                auto lam_class = quartic_abs_invariant(F, j4);
                if (!lam_class)
                    return und_logged("the quartic cone carries a repeated line", std::move(log));
                std::optional<typename K::Elem> lam;
                if (t.ab_in_field) {
                    lam = t.b;
                } else {
                    lam = *lam_class;
                    log.push_back(
                        "lambda reported through the absolute invariant; the lines stay conjugate "
                        "over the base field");
                }
                return row_then_scan(F, p, G, "T_{4,4,2}", {}, lam, lam_class, j4, "", {},
                                     std::move(log));
            }
        }
    }

    return mod2_logged("corank 2 with a quintic or deeper jet lies beyond the unimodal strata",
                       std::move(log));
}

} // namespace classify_detail

// --------------------------------------------------------------- classify

// Full classification of an isolated singularity against the unimodal
// table: split off squares, dispatch on the corank and the jet shape, put
// the reduced germ beside its table row, and cross-check every claim
// through an independent Tjurina computation. Outcomes that cannot be
// certified come back Undetermined rather than guessed.
template <class K>
Verdict classify(const Series<K>& f) {
    using namespace classify_detail;
    const K& F = f.F;
    long long p = static_cast<long long>(F.characteristic());
    if (p == 2 || p == 3)
        fail("SmallCharUnsupported", "classification is stated for characteristic 0 or p > 3");
    if (f.is_zero()) fail("PreconditionViolated", "cannot classify the zero germ");
    unsigned ord = *f.order();
    if (ord == 0) fail("PreconditionViolated", "a unit is not a singular germ");
    if (ord == 1) return make_simple("A_0", "regular point of the zero set");

    try {
        auto tf = tau(f);
        if (!tf.finite) {
            Verdict v;
            v.kind = Verdict::Kind::NotIsolated;
            v.reason = "no finite Tjurina certificate below degree cap " +
                       std::to_string(tf.cap_used);
            return v;
        }
        auto te = tau_ext(f);
        if (!te.finite)
            return make_undetermined("extended Tjurina algebra not certified finite");
        GuardCtx<K> G;
        G.tau_in = tf.dimension;
        G.taue_in = te.dimension;

        unsigned N = determinacy_tangent(f).k + 2;
        auto sp = split(f, N);
        G.squares = sp.squares;
        std::vector<std::string> log = sp.log;
        Series<K> g = sp.residual;
        if (g.is_zero()) {
            auto v = make_simple("A_1", "nondegenerate quadratic form");
            v.transform_log = std::move(log);
            return v;
        }
        if (g.R.n == 1) {
            auto v = make_simple("A_" + std::to_string(*g.order() - 1));
            v.transform_log = std::move(log);
            return v;
        }
        if (g.R.n == 2) return corank2(std::move(g), p, G, std::move(log));
        if (g.R.n == 3) return corank3(std::move(g), p, G, std::move(log));
        return mod2_logged("corank at least 4 lies beyond the unimodal strata", std::move(log));
    } catch (const CalcError& e) {
        return classify_detail::make_undetermined(std::string("internal obstruction: ") + e.what());
    }
}

} // namespace germ
