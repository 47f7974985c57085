// Multiple-scales engine.
//
// The expansion works directly on the rescaled system written for the
// deviation (s, z) from the steady state (Q, b/Q):
//
//   s_t = dxx( sum_j d_j s^j ) + Gamma [ (b-1) s + Q^2 z + P(s,z) ],
//   z_t = (1/eta^2) dxx( sum_j e_j (z+db/Q)^j )
//         + (Gamma/eta^2) [ -b s - Q^2 z - P(s,z) ],
//
// with P(s,z) = 2 Q s z + (b/Q) s^2 + s^2 z (the kinetics are exactly
// cubic), d_j = binom(m+1, j) Q^{m+1-j}, e_j = binom(n+1, j) (b^c/Q)^{n+1-j}
// and db = b - b^c = eps^2 b^c the shift of the inhibitor base state.
// Substituting b = b^c(1 + eps^2), s = sum eps^k s_k, z = sum eps^k z_k and
// d/dt = sum_tau eps^tau d/dT_tau, the equation at each order k reads
//
//   (Gamma K - k^2 D) w_k = [time derivatives]_k - [assembled rhs]_k
//
// planform by planform. Fields are stored as polynomials over cosine
// planforms cos(phi_x x) cos(phi_y y) indexed by integer lattice pairs,
// with coefficients that are polynomials in the slow amplitudes, so every
// product reduction cos*cos -> cos is exact bookkeeping and the Galerkin
// projections are coefficient lookups.

#include "bruss/wnl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bruss {

namespace {

// ---- amplitude polynomials --------------------------------------------------

using Mono = std::array<int, 2>;  // powers of (A1, A2)
using AmpPoly = std::map<Mono, double>;

void ap_acc(AmpPoly& a, const AmpPoly& b, double s = 1.0) {
    for (const auto& [m, c] : b) {
        double& slot = a[m];
        slot += s * c;
        if (slot == 0.0) a.erase(m);
    }
}

AmpPoly ap_mul(const AmpPoly& a, const AmpPoly& b) {
    AmpPoly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) out[{ma[0] + mb[0], ma[1] + mb[1]}] += ca * cb;
    return out;
}

double ap_maxabs(const AmpPoly& a) {
    double m = 0.0;
    for (const auto& [mono, c] : a) m = std::max(m, std::abs(c));
    return m;
}

double ap_coef(const AmpPoly& a, int i, int j) {
    const auto it = a.find(Mono{i, j});
    return it == a.end() ? 0.0 : it->second;
}

// derivative along the given per-amplitude flow (chain rule)
AmpPoly ap_dt(const AmpPoly& a, const std::array<AmpPoly, 2>& flow) {
    AmpPoly out;
    for (const auto& [m, c] : a) {
        for (int v = 0; v < 2; ++v) {
            if (m[v] == 0 || flow[v].empty()) continue;
            Mono dm = m;
            dm[v] -= 1;
            AmpPoly part{{dm, c * m[v]}};
            ap_acc(out, ap_mul(part, flow[v]));
        }
    }
    return out;
}

// ---- planform polynomials ---------------------------------------------------

using Key = std::pair<int, int>;
using Planform = std::map<Key, AmpPoly>;   // scalar field over cosine planforms
using Series = std::vector<Planform>;      // index = epsilon order

void pf_acc(Planform& a, const Planform& b, double s = 1.0) {
    for (const auto& [k, p] : b) ap_acc(a[k], p, s);
}

// cos(f1 x)cos(g1 y) * cos(f2 x)cos(g2 y) -> quarter-weight sum over the
// four combinations |f1 +- f2|, |g1 +- g2|
Planform pf_mul(const Planform& a, const Planform& b) {
    Planform out;
    for (const auto& [ka, pa] : a) {
        for (const auto& [kb, pb] : b) {
            const AmpPoly prod = ap_mul(pa, pb);
            if (prod.empty()) continue;
            const int ps[2] = {std::abs(ka.first - kb.first), ka.first + kb.first};
            const int qs[2] = {std::abs(ka.second - kb.second), ka.second + kb.second};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) ap_acc(out[{ps[i], qs[j]}], prod, 0.25);
        }
    }
    return out;
}

Series se_zero(int maxord) { return Series(maxord + 1); }

void se_acc(Series& a, const Series& b, double s = 1.0) {
    for (std::size_t k = 0; k < b.size() && k < a.size(); ++k) pf_acc(a[k], b[k], s);
}

Series se_mul(const Series& a, const Series& b, int maxord) {
    Series out = se_zero(maxord);
    for (int i = 0; i <= maxord; ++i) {
        if (a[i].empty()) continue;
        for (int j = 0; i + j <= maxord; ++j) {
            if (b[j].empty()) continue;
            pf_acc(out[i + j], pf_mul(a[i], b[j]));
        }
    }
    return out;
}

// multiply by eps^2 (shift two orders up)
Series se_shift2(const Series& a, int maxord) {
    Series out = se_zero(maxord);
    for (int k = 0; k + 2 <= maxord; ++k) pf_acc(out[k + 2], a[k]);
    return out;
}

// ---- planform basis ---------------------------------------------------------

// Either the Neumann lattice of a rectangle/line (k^2 exact rational) or a
// pure harmonic family j * k_c used for the continuum Ginzburg-Landau
// derivation.
struct PBasis {
    bool lattice = true;
    Domain dom;
    double kc = 0.0;  // harmonic base frequency

    double k2_of(const Key& k) const {
        if (lattice) return dom.mode_k2(k.first, k.second).value();
        return kc * kc * static_cast<double>(k.first) * static_cast<double>(k.first);
    }
    double freq_x(const Key& k) const {
        if (lattice) return dom.freq_x(k.first).value();
        return kc * k.first;
    }
    double freq_y(const Key& k) const {
        if (lattice) return dom.freq_y(k.second).value();
        return 0.0;
    }
};

Planform pf_laplacian(const Planform& a, const PBasis& basis) {
    Planform out;
    for (const auto& [k, p] : a) {
        const double k2 = basis.k2_of(k);
        if (k2 == 0.0) continue;
        ap_acc(out[k], p, -k2);
    }
    return out;
}

Series se_laplacian(const Series& a, const PBasis& basis, int maxord) {
    Series out = se_zero(maxord);
    for (int k = 0; k <= maxord; ++k) out[k] = pf_laplacian(a[k], basis);
    return out;
}

// generalized binomial coefficient binom(x, j) for real x
double genbinom(double x, int j) {
    double out = 1.0;
    for (int i = 0; i < j; ++i) out *= (x - i) / (i + 1);
    return out;
}

// ---- engine -----------------------------------------------------------------

struct EngineConfig {
    NondimParams np;  // at the mode-exact threshold b_crit
    PBasis basis;
    std::vector<Key> critical;
    KernelPair ker;
    int max_order = 3;
    bool use_T1 = false;
    int n_amps = 1;
};

struct EngineResult {
    // flows[tau][amp] with tau in {1, 2, 4}
    std::map<int, std::array<AmpPoly, 2>> flows;
    Series S, Z;  // the expansion fields s_k, z_k
    double max_residual = 0.0;
};

struct RhsSeries {
    Series u, v;
};

RhsSeries assemble_rhs(const EngineConfig& cfg, const Series& S, const Series& Z, int maxord) {
    const NondimParams& np = cfg.np;
    const double bc = np.b;
    const double beta = bc / np.Q;
    const double G = np.Gamma;
    const double ie2 = 1.0 / np.eta2();

    // powers of s and of the shifted inhibitor deviation (z + eps^2 b^c/Q)
    Series Zh = Z;
    ap_acc(Zh[std::min(2, maxord)][{0, 0}], AmpPoly{{Mono{0, 0}, beta}},
           maxord >= 2 ? 1.0 : 0.0);
    std::vector<Series> Sp(maxord + 1), Zp(maxord + 1);
    Sp[1] = S;
    Zp[1] = Zh;
    for (int j = 2; j <= maxord; ++j) {
        Sp[j] = se_mul(Sp[j - 1], S, maxord);
        Zp[j] = se_mul(Zp[j - 1], Zh, maxord);
    }

    Series diff_u = se_zero(maxord), diff_v = se_zero(maxord);
    for (int j = 1; j <= maxord; ++j) {
        const double dj = genbinom(np.m + 1.0, j) * std::pow(np.Q, np.m + 1.0 - j);
        const double ej = genbinom(np.n + 1.0, j) * std::pow(beta, np.n + 1.0 - j);
        if (dj != 0.0) se_acc(diff_u, Sp[j], dj);
        if (ej != 0.0) se_acc(diff_v, Zp[j], ej);
    }
    diff_u = se_laplacian(diff_u, cfg.basis, maxord);
    diff_v = se_laplacian(diff_v, cfg.basis, maxord);

    // kinetics: exact cubic polynomials, with the eps^2 b^c shift of the
    // bifurcation parameter entering both rows with opposite sign
    const Series SZ = se_mul(S, Z, maxord);
    const Series& S2 = Sp[std::min(2, maxord)];
    const Series S2Z = maxord >= 3 ? se_mul(S2, Z, maxord) : se_zero(maxord);

    Series kin = se_zero(maxord);  // the bracket of the u-row, without Gamma
    se_acc(kin, S, bc - 1.0);
    se_acc(kin, Z, np.Q2());
    se_acc(kin, SZ, 2.0 * np.Q);
    if (maxord >= 2) se_acc(kin, S2, bc / np.Q);
    if (maxord >= 3) se_acc(kin, S2Z, 1.0);

    Series shift = se_zero(maxord);  // eps^2 b^c (s + s^2/Q)
    se_acc(shift, S, bc);
    if (maxord >= 2) se_acc(shift, S2, bc / np.Q);
    shift = se_shift2(shift, maxord);

    // the v-row bracket differs from the u-row in its linear part only
    Series kin_v = se_zero(maxord);
    se_acc(kin_v, S, -bc);
    se_acc(kin_v, Z, -np.Q2());
    se_acc(kin_v, SZ, -2.0 * np.Q);
    if (maxord >= 2) se_acc(kin_v, S2, -bc / np.Q);
    if (maxord >= 3) se_acc(kin_v, S2Z, -1.0);

    RhsSeries rhs;
    rhs.u = diff_u;
    se_acc(rhs.u, kin, G);
    se_acc(rhs.u, shift, G);
    rhs.v = se_zero(maxord);
    se_acc(rhs.v, diff_v, ie2);
    se_acc(rhs.v, kin_v, G * ie2);
    se_acc(rhs.v, shift, -G * ie2);
    return rhs;
}

bool is_critical(const EngineConfig& cfg, const Key& k) {
    return std::find(cfg.critical.begin(), cfg.critical.end(), k) != cfg.critical.end();
}

EngineResult run_expansion(const EngineConfig& cfg) {
    const int maxord = cfg.max_order;
    EngineResult res;
    res.S = se_zero(maxord);
    res.Z = se_zero(maxord);

    for (std::size_t i = 0; i < cfg.critical.size(); ++i) {
        Mono mi{0, 0};
        mi[i] = 1;
        res.S[1][cfg.critical[i]][mi] += cfg.ker.rho.x;
        res.Z[1][cfg.critical[i]][mi] += cfg.ker.rho.y;
    }

    const Vec2 psi = cfg.ker.psi_adj;
    const Vec2 rho = cfg.ker.rho;

    for (int k = 2; k <= maxord; ++k) {
        const RhsSeries rhs = assemble_rhs(cfg, res.S, res.Z, maxord);

        // known slow-time derivatives entering at this order
        Planform TDu, TDv;
        for (const auto& [tau, flow] : res.flows) {
            const int src = k - tau;
            if (src < 1) continue;
            for (const auto& [key, p] : res.S[src]) ap_acc(TDu[key], ap_dt(p, flow));
            for (const auto& [key, p] : res.Z[src]) ap_acc(TDv[key], ap_dt(p, flow));
        }

        // the timescale whose flow is introduced at this order
        int tau_star = 0;
        if (k - 1 == 1 && cfg.use_T1) tau_star = 1;
        else if (k - 1 == 2) tau_star = 2;
        else if (k - 1 == 4) tau_star = 4;

        if (tau_star) {
            std::array<AmpPoly, 2> flow;
            for (std::size_t i = 0; i < cfg.critical.size(); ++i) {
                const Key& ck = cfg.critical[i];
                AmpPoly src_u, src_v;
                if (auto it = rhs.u[k].find(ck); it != rhs.u[k].end()) src_u = it->second;
                if (auto it = rhs.v[k].find(ck); it != rhs.v[k].end()) src_v = it->second;
                if (auto it = TDu.find(ck); it != TDu.end()) ap_acc(src_u, it->second, -1.0);
                if (auto it = TDv.find(ck); it != TDv.end()) ap_acc(src_v, it->second, -1.0);
                // dA_i/dtau* = <source, psi> (with <rho, psi> = 1)
                AmpPoly f;
                ap_acc(f, src_u, psi.x);
                ap_acc(f, src_v, psi.y);
                flow[i] = std::move(f);
            }
            res.flows[tau_star] = flow;
            // the new flow enters the time derivative through d w1 / d tau*
            for (const auto& [key, p] : res.S[1]) ap_acc(TDu[key], ap_dt(p, res.flows[tau_star]));
            for (const auto& [key, p] : res.Z[1]) ap_acc(TDv[key], ap_dt(p, res.flows[tau_star]));
        }

        // solve (Gamma K - k^2 D) w_k = TD_k - RHS_k planform by planform
        Planform all;
        pf_acc(all, rhs.u[k]);
        pf_acc(all, rhs.v[k]);
        pf_acc(all, TDu);
        pf_acc(all, TDv);

        double scale = 0.0;
        for (const auto& [key, p] : all) scale = std::max(scale, ap_maxabs(p));

        for (const auto& [key, ignored] : all) {
            AmpPoly bu = TDu.count(key) ? TDu[key] : AmpPoly{};
            AmpPoly bv = TDv.count(key) ? TDv[key] : AmpPoly{};
            if (auto it = rhs.u[k].find(key); it != rhs.u[k].end()) ap_acc(bu, it->second, -1.0);
            if (auto it = rhs.v[k].find(key); it != rhs.v[k].end()) ap_acc(bv, it->second, -1.0);
            if (bu.empty() && bv.empty()) continue;

            const Mat2 M = mode_matrix(cfg.np, cfg.basis.k2_of(key));
            const bool crit = is_critical(cfg, key);

            std::map<Mono, Vec2> rhs_vec;
            for (const auto& [m, c] : bu) rhs_vec[m].x = c;
            for (const auto& [m, c] : bv) rhs_vec[m].y = c;

            for (const auto& [m, b2] : rhs_vec) {
                Vec2 x;
                if (crit) {
                    const double viol = std::abs(dot(b2, psi));
                    res.max_residual = std::max(res.max_residual, viol / (scale + 1e-300));
                    if (viol > 1e-6 * (scale + 1.0))
                        throw std::domain_error(
                            "wnl expansion: solvability violation on a critical planform "
                            "(is the mode set resonant?)");
                    x = solve2_pinv(M, b2, rho);
                } else {
                    const double mscale =
                        std::abs(M.a) + std::abs(M.b) + std::abs(M.c) + std::abs(M.d);
                    if (std::abs(M.det()) < 1e-10 * mscale * mscale)
                        throw std::domain_error(
                            "wnl expansion: accidentally degenerate harmonic planform");
                    x = solve2(M, b2);
                }
                if (x.x != 0.0) res.S[k][key][m] += x.x;
                if (x.y != 0.0) res.Z[k][key][m] += x.y;
            }
        }
    }
    return res;
}

// ---- helpers for the public builders ---------------------------------------

Domain domain_for(const ModeSet& ms, const Domain& dom) { return dom; }

std::vector<Key> critical_keys(const ModeSet& ms) {
    std::vector<Key> keys;
    for (const auto& m : ms.modes) keys.emplace_back(m.p, m.q);
    return keys;
}

WnlReconstruction make_recon(const EngineConfig& cfg, const EngineResult& er) {
    WnlReconstruction rc;
    rc.n_modes = static_cast<int>(cfg.critical.size());
    rc.rho = cfg.ker.rho;
    for (const Key& k : cfg.critical) {
        rc.phi_x.push_back(cfg.basis.freq_x(k));
        rc.phi_y.push_back(cfg.basis.freq_y(k));
    }
    Planform all;
    pf_acc(all, er.S[2]);
    pf_acc(all, er.Z[2]);
    for (const auto& [key, ignored] : all) {
        W2Term t;
        t.p = key.first;
        t.q = key.second;
        t.phi_x = cfg.basis.freq_x(key);
        t.phi_y = cfg.basis.freq_y(key);
        std::map<Mono, W2Term::Mono> monos;
        if (auto it = er.S[2].find(key); it != er.S[2].end())
            for (const auto& [m, c] : it->second) {
                monos[m].i = m[0];
                monos[m].j = m[1];
                monos[m].u = c;
            }
        if (auto it = er.Z[2].find(key); it != er.Z[2].end())
            for (const auto& [m, c] : it->second) {
                monos[m].i = m[0];
                monos[m].j = m[1];
                monos[m].v = c;
            }
        for (const auto& [m, mono] : monos) t.monos.push_back(mono);
        if (!t.monos.empty()) rc.w2.push_back(std::move(t));
    }
    return rc;
}

double epsilon2_of(const NondimParams& np_run, double b_crit) {
    return (np_run.b - b_crit) / b_crit;
}

void fill_common(AmplitudeModel& m, const NondimParams& np_run, const CriticalPoint& cp,
                 const KernelPair& ker, const EngineConfig& cfg, const EngineResult& er) {
    m.b_crit = cp.b_crit;
    m.k2c = cp.k2;
    m.kernels = ker;
    m.np_run = np_run;
    const double e2 = epsilon2_of(np_run, cp.b_crit);
    m.epsilon = e2 > 0.0 ? std::sqrt(e2) : 0.0;
    m.solvability_residual = er.max_residual;
    m.recon = make_recon(cfg, er);
}

}  // namespace

std::string amplitude_kind_name(AmplitudeKind k) {
    switch (k) {
        case AmplitudeKind::cubic_sl: return "cubic_sl";
        case AmplitudeKind::gl: return "gl";
        case AmplitudeKind::quintic_sl: return "quintic_sl";
        case AmplitudeKind::coupled: return "coupled";
        case AmplitudeKind::resonant: return "resonant";
    }
    return "?";
}

KernelPair critical_kernels(const NondimParams& np_at_bc, double k2) {
    const Mat2 M = mode_matrix(np_at_bc, k2);
    const double mscale = std::abs(M.a) + std::abs(M.b) + std::abs(M.c) + std::abs(M.d);
    if (std::abs(M.det()) > 1e-6 * mscale * mscale)
        throw std::domain_error(
            "critical_kernels: thresholds inconsistent, matrix is not rank-deficient");
    KernelPair kp;
    // M12 = Gamma Q^2 never vanishes, so rho = (1, -M11/M12) spans the kernel
    kp.rho = {1.0, -M.a / M.b};
    Vec2 psi{-M.c, M.a};
    const double norm = dot(kp.rho, psi);
    if (std::abs(norm) < 1e-12 * (std::abs(psi.x) + std::abs(psi.y)))
        throw std::domain_error("critical_kernels: defective critical eigenvalue");
    kp.psi_adj = psi * (1.0 / norm);
    return kp;
}

Vec2 solve_harmonic(const NondimParams& np_at_bc, double harmonic_k2, const Vec2& rhs) {
    const Mat2 M = mode_matrix(np_at_bc, harmonic_k2);
    const double mscale = std::abs(M.a) + std::abs(M.b) + std::abs(M.c) + std::abs(M.d);
    if (std::abs(M.det()) > 1e-8 * mscale * mscale) return solve2(M, rhs);
    // singular: require rhs orthogonal to the adjoint kernel, then return
    // the least-squares solution orthogonal to rho
    const KernelPair kp = critical_kernels(np_at_bc, harmonic_k2);
    const double viol = std::abs(dot(rhs, kp.psi_adj));
    const double rscale = rhs.norm() * (std::abs(kp.psi_adj.x) + std::abs(kp.psi_adj.y));
    if (viol > 1e-6 * (rscale + 1e-300) && rscale > 0.0)
        throw std::domain_error("solve_harmonic: solvability violation, rhs not orthogonal "
                                "to the adjoint kernel");
    return solve2_pinv(M, rhs, kp.rho);
}

ExpansionTables expansion_tables(const NondimParams& np_at_bc) {
    ExpansionTables t;
    const double Q = np_at_bc.Q;
    const double bc = np_at_bc.b;
    const double m = np_at_bc.m, n = np_at_bc.n;
    const double beta = bc / Q;
    t.D1 = Mat2::diag(0.5 * m * (m + 1.0) * std::pow(Q, m - 1.0),
                      0.5 * n * (n + 1.0) / np_at_bc.eta2() * std::pow(beta, n - 1.0));
    t.D2 = Mat2::diag(m * (m * m - 1.0) / 6.0 * std::pow(Q, m - 2.0),
                      n * (n * n - 1.0) / 6.0 / np_at_bc.eta2() * std::pow(beta, n - 2.0));
    t.quad_uv = 2.0 * Q;
    t.quad_uu = bc / Q;
    t.b1 = 0.0;
    t.b2 = bc;
    return t;
}

ModeSet select_critical_modes(const NondimParams& np, const Domain& dom) {
    const CriticalPoint cont = turing_critical_point(np);
    const double k2_lo = cont.k2 / 6.0, k2_hi = cont.k2 * 6.0;
    const int p_max = static_cast<int>(std::floor(dom.Lx_over_pi.value() * std::sqrt(k2_hi))) + 1;
    const int q_max =
        dom.dims == 1
            ? 0
            : static_cast<int>(std::floor(dom.Ly_over_pi.value() * std::sqrt(k2_hi))) + 1;

    double best_b = 0.0;
    bool found = false;
    Rational best_k2;
    std::map<std::pair<std::int64_t, std::int64_t>, std::vector<ModePair>> groups;
    for (int p = 0; p <= p_max; ++p) {
        for (int q = 0; q <= q_max; ++q) {
            if (p == 0 && q == 0) continue;
            const Rational k2 = dom.mode_k2(p, q);
            const double k2v = k2.value();
            if (k2v < k2_lo || k2v > k2_hi) continue;
            groups[{k2.num, k2.den}].push_back(
                ModePair{p, q, dom.freq_x(p), dom.freq_y(q), k2});
        }
    }
    for (const auto& [key, modes] : groups) {
        try {
            const double b = mode_critical_point(np, modes.front().k2.value()).b_crit;
            if (!found || b < best_b) {
                found = true;
                best_b = b;
                best_k2 = modes.front().k2;
            }
        } catch (const std::domain_error&) {
        }
    }
    if (!found) throw std::domain_error("no admissible unstable mode near the critical circle");

    ModeSet out;
    out.k2 = best_k2;
    out.modes = groups.at({best_k2.num, best_k2.den});
    out.multiplicity = static_cast<int>(out.modes.size());
    out.growth = 0.0;
    out.resonance = Resonance::none;
    if (out.multiplicity == 2) {
        // reuse the classifier from admissible_modes via a tiny local check
        const Surd two(Rational(2), 0);
        const auto& a = out.modes[0];
        const auto& b = out.modes[1];
        auto res = [&](const ModePair& mi, const ModePair& mj) {
            return (mi.phi_x.is_zero() && mi.phi_y == two * mj.phi_y) ||
                   (mi.phi_x == two * mj.phi_x && mi.phi_y.is_zero());
        };
        if (res(a, b) || res(b, a)) out.resonance = Resonance::resonant;
    }
    return out;
}

namespace {

EngineConfig make_config(const NondimParams& np_run, const Domain& dom, const ModeSet& ms,
                         const CriticalPoint& cp, int max_order, bool use_T1) {
    EngineConfig cfg;
    cfg.np = cp.np;
    cfg.basis.lattice = true;
    cfg.basis.dom = dom;
    cfg.critical = critical_keys(ms);
    cfg.ker = critical_kernels(cp.np, cp.k2);
    cfg.max_order = max_order;
    cfg.use_T1 = use_T1;
    cfg.n_amps = static_cast<int>(cfg.critical.size());
    return cfg;
}

void check_only_monomials(const AmpPoly& p, const std::vector<Mono>& allowed,
                          const char* where) {
    const double scale = ap_maxabs(p) + 1e-300;
    for (const auto& [m, c] : p) {
        if (std::find(allowed.begin(), allowed.end(), m) != allowed.end()) continue;
        if (std::abs(c) > 1e-8 * scale)
            throw std::domain_error(std::string("wnl: unexpected amplitude monomial in ") +
                                    where);
    }
}

}  // namespace

AmplitudeModel stuart_landau_coeffs(const NondimParams& np_run, const Domain& dom) {
    np_run.validate();
    const ModeSet ms = select_critical_modes(np_run, dom);
    if (ms.multiplicity != 1)
        throw std::domain_error("stuart_landau_coeffs: critical eigenvalue is not simple "
                                "(multiplicity " + std::to_string(ms.multiplicity) + ")");
    const CriticalPoint cp = mode_critical_point(np_run, ms.k2.value());
    EngineConfig cfg = make_config(np_run, dom, ms, cp, 3, false);
    const EngineResult er = run_expansion(cfg);

    const AmpPoly& flow = er.flows.at(2)[0];
    check_only_monomials(flow, {Mono{1, 0}, Mono{3, 0}}, "cubic Stuart-Landau flow");

    AmplitudeModel m;
    m.kind = AmplitudeKind::cubic_sl;
    m.sigma = ap_coef(flow, 1, 0);
    m.L = -ap_coef(flow, 3, 0);
    fill_common(m, np_run, cp, cfg.ker, cfg, er);
    m.amp_scale = m.epsilon;
    return m;
}

AmplitudeModel ginzburg_landau_coeffs(const NondimParams& np_run) {
    np_run.validate();
    const CriticalPoint cp = turing_critical_point(np_run);
    const double kc = std::sqrt(cp.k2);

    EngineConfig cfg;
    cfg.np = cp.np;
    cfg.basis.lattice = false;
    cfg.basis.kc = kc;
    cfg.critical = {Key{1, 0}};
    cfg.ker = critical_kernels(cp.np, cp.k2);
    cfg.max_order = 3;
    cfg.n_amps = 1;
    const EngineResult er = run_expansion(cfg);

    const AmpPoly& flow = er.flows.at(2)[0];
    check_only_monomials(flow, {Mono{1, 0}, Mono{3, 0}}, "Ginzburg-Landau reaction flow");

    AmplitudeModel m;
    m.kind = AmplitudeKind::gl;
    m.sigma = ap_coef(flow, 1, 0);
    m.L = -ap_coef(flow, 3, 0);

    const Linearization lin = linearize(cp.np);
    const Vec2 rho = cfg.ker.rho;
    const Vec2 psi = cfg.ker.psi_adj;
    const Vec2 w21 = solve_harmonic(cp.np, cp.k2, (lin.D * rho) * (-2.0 * kc));
    m.w21 = w21;
    m.nu = -dot((lin.D * w21) * (2.0 * kc) + lin.D * rho, psi);

    fill_common(m, np_run, cp, cfg.ker, cfg, er);
    m.amp_scale = m.epsilon;
    return m;
}

AmplitudeModel quintic_coeffs(const NondimParams& np_run, const Domain& dom) {
    np_run.validate();
    const ModeSet ms = select_critical_modes(np_run, dom);
    if (ms.multiplicity != 1)
        throw std::domain_error("quintic_coeffs: critical eigenvalue is not simple");
    const CriticalPoint cp = mode_critical_point(np_run, ms.k2.value());
    EngineConfig cfg = make_config(np_run, dom, ms, cp, 5, false);
    const EngineResult er = run_expansion(cfg);

    const AmpPoly& f2 = er.flows.at(2)[0];
    const AmpPoly& f4 = er.flows.at(4)[0];
    check_only_monomials(f2, {Mono{1, 0}, Mono{3, 0}}, "quintic T2 flow");
    check_only_monomials(f4, {Mono{1, 0}, Mono{3, 0}, Mono{5, 0}}, "quintic T4 flow");

    AmplitudeModel m;
    m.kind = AmplitudeKind::quintic_sl;
    m.sigma = ap_coef(f2, 1, 0);
    m.L = -ap_coef(f2, 3, 0);
    m.sigma4 = ap_coef(f4, 1, 0);
    m.L4 = -ap_coef(f4, 3, 0);
    m.R4 = ap_coef(f4, 5, 0);
    fill_common(m, np_run, cp, cfg.ker, cfg, er);
    const double e2 = epsilon2_of(np_run, cp.b_crit);
    m.sigma_bar = m.sigma + e2 * m.sigma4;
    m.L_bar = m.L + e2 * m.L4;
    m.R_bar = e2 * m.R4;
    m.amp_scale = m.epsilon;
    return m;
}

AmplitudeModel coupled_landau_coeffs(const NondimParams& np_run, const Domain& dom) {
    np_run.validate();
    const ModeSet ms = select_critical_modes(np_run, dom);
    if (ms.multiplicity != 2)
        throw std::domain_error("coupled_landau_coeffs: multiplicity is not 2");
    if (ms.resonance == Resonance::resonant)
        throw std::domain_error("coupled_landau_coeffs: resonance detected, use resonant_coeffs");
    const CriticalPoint cp = mode_critical_point(np_run, ms.k2.value());
    EngineConfig cfg = make_config(np_run, dom, ms, cp, 3, false);
    const EngineResult er = run_expansion(cfg);

    const AmpPoly& f1 = er.flows.at(2)[0];
    const AmpPoly& f2 = er.flows.at(2)[1];
    check_only_monomials(f1, {Mono{1, 0}, Mono{3, 0}, Mono{1, 2}}, "coupled flow 1");
    check_only_monomials(f2, {Mono{0, 1}, Mono{0, 3}, Mono{2, 1}}, "coupled flow 2");

    AmplitudeModel m;
    m.kind = AmplitudeKind::coupled;
    m.sigma = ap_coef(f1, 1, 0);
    const double sigma_b = ap_coef(f2, 0, 1);
    if (std::abs(m.sigma - sigma_b) > 1e-8 * (std::abs(m.sigma) + 1e-300))
        throw std::domain_error("coupled_landau_coeffs: growth rates of the two planforms "
                                "disagree");
    m.L1 = -ap_coef(f1, 3, 0);
    m.R1 = ap_coef(f1, 1, 2);
    m.L2 = -ap_coef(f2, 0, 3);
    m.R2 = ap_coef(f2, 2, 1);
    fill_common(m, np_run, cp, cfg.ker, cfg, er);
    m.amp_scale = m.epsilon;
    return m;
}

AmplitudeModel resonant_coeffs(const NondimParams& np_run, const Domain& dom) {
    np_run.validate();
    const ModeSet ms = select_critical_modes(np_run, dom);
    if (ms.multiplicity != 2 || ms.resonance != Resonance::resonant)
        throw std::domain_error("resonant_coeffs: mode set is not a resonant pair");
    // order the pair as in the resonance relations: mode 2 is the one with
    // psi = 0 and phi_2 = 2 phi_1
    ModeSet ordered = ms;
    if (!ordered.modes[1].phi_y.is_zero()) std::swap(ordered.modes[0], ordered.modes[1]);
    if (!ordered.modes[1].phi_y.is_zero())
        throw std::domain_error("resonant_coeffs: unexpected resonant pair structure");

    const CriticalPoint cp = mode_critical_point(np_run, ordered.k2.value());
    EngineConfig cfg = make_config(np_run, dom, ordered, cp, 3, true);
    const EngineResult er = run_expansion(cfg);

    const AmpPoly& g1 = er.flows.at(1)[0];
    const AmpPoly& g2 = er.flows.at(1)[1];
    check_only_monomials(g1, {Mono{1, 1}}, "resonant T1 flow 1");
    check_only_monomials(g2, {Mono{2, 0}}, "resonant T1 flow 2");
    const AmpPoly& f1 = er.flows.at(2)[0];
    const AmpPoly& f2 = er.flows.at(2)[1];
    check_only_monomials(f1, {Mono{1, 0}, Mono{3, 0}, Mono{1, 2}}, "resonant T2 flow 1");
    check_only_monomials(f2, {Mono{0, 1}, Mono{0, 3}, Mono{2, 1}}, "resonant T2 flow 2");

    // Composite system for the rescaled amplitudes B = A/eps in T = eps^2 t:
    //   dB1/dT = sigma1 B1 - L1 B1 B2 + eps^2 (R1 B1 B2^2 + S1 B1^3), ...
    // so the quadratic coefficients are the T1-level ones and the cubic
    // coefficients carry the explicit eps^2 factor.
    AmplitudeModel m;
    m.kind = AmplitudeKind::resonant;
    const double e2 = epsilon2_of(np_run, cp.b_crit);
    m.sigma1 = ap_coef(f1, 1, 0);
    m.sigma2 = ap_coef(f2, 0, 1);
    m.L1 = -ap_coef(g1, 1, 1);
    m.L2 = -ap_coef(g2, 2, 0);
    m.R1 = e2 * ap_coef(f1, 1, 2);
    m.S1 = e2 * ap_coef(f1, 3, 0);
    m.R2 = e2 * ap_coef(f2, 2, 1);
    m.S2 = e2 * ap_coef(f2, 0, 3);
    m.sigma = m.sigma1;
    fill_common(m, np_run, cp, cfg.ker, cfg, er);
    m.amp_scale = m.epsilon * m.epsilon;
    return m;
}

AmplitudeModel wnl_coeffs(const NondimParams& np_run, const Domain& dom, AmplitudeKind kind) {
    switch (kind) {
        case AmplitudeKind::cubic_sl: return stuart_landau_coeffs(np_run, dom);
        case AmplitudeKind::gl: return ginzburg_landau_coeffs(np_run);
        case AmplitudeKind::quintic_sl: return quintic_coeffs(np_run, dom);
        case AmplitudeKind::coupled: return coupled_landau_coeffs(np_run, dom);
        case AmplitudeKind::resonant: return resonant_coeffs(np_run, dom);
    }
    throw std::invalid_argument("wnl_coeffs: unknown kind");
}

Vec2 wnl_evaluate(const AmplitudeModel& model, const std::vector<double>& amplitudes, int order,
                  double x, double y) {
    if (order < 1 || order > 2) throw std::invalid_argument("wnl_evaluate: order must be 1 or 2");
    const WnlReconstruction& rc = model.recon;
    if (static_cast<int>(amplitudes.size()) != rc.n_modes)
        throw std::invalid_argument("wnl_evaluate: amplitude count does not match the mode set");

    const double eps = model.epsilon;
    // resonant amplitudes are stored in the rescaled gauge B = A/eps
    std::vector<double> A = amplitudes;
    if (model.kind == AmplitudeKind::resonant)
        for (double& a : A) a *= eps;

    const SteadyState ss = steady_state(model.np_run);
    double du = 0.0, dv = 0.0;
    for (int i = 0; i < rc.n_modes; ++i) {
        const double c = std::cos(rc.phi_x[i] * x) * std::cos(rc.phi_y[i] * y);
        du += eps * A[i] * rc.rho.x * c;
        dv += eps * A[i] * rc.rho.y * c;
    }
    if (order >= 2) {
        for (const auto& t : rc.w2) {
            const double c = std::cos(t.phi_x * x) * std::cos(t.phi_y * y);
            for (const auto& mono : t.monos) {
                double amp = 1.0;
                for (int k = 0; k < mono.i; ++k) amp *= A[0];
                for (int k = 0; k < mono.j; ++k) amp *= A.size() > 1 ? A[1] : 0.0;
                du += eps * eps * amp * mono.u * c;
                dv += eps * eps * amp * mono.v * c;
            }
        }
    }
    return {ss.u_bar + du, ss.v_bar + dv};
}

// ---- JSON -------------------------------------------------------------------

nlohmann::json amplitude_model_to_json(const AmplitudeModel& m) {
    nlohmann::json j;
    j["kind"] = amplitude_kind_name(m.kind);
    j["sigma"] = m.sigma;
    j["L"] = m.L;
    j["nu"] = m.nu;
    j["sigma4"] = m.sigma4;
    j["L4"] = m.L4;
    j["R4"] = m.R4;
    j["sigma_bar"] = m.sigma_bar;
    j["L_bar"] = m.L_bar;
    j["R_bar"] = m.R_bar;
    j["L1"] = m.L1;
    j["L2"] = m.L2;
    j["R1"] = m.R1;
    j["R2"] = m.R2;
    j["sigma1"] = m.sigma1;
    j["sigma2"] = m.sigma2;
    j["S1"] = m.S1;
    j["S2"] = m.S2;
    j["b_crit"] = m.b_crit;
    j["k2c"] = m.k2c;
    j["epsilon"] = m.epsilon;
    j["amp_scale"] = m.amp_scale;
    j["rho"] = {m.kernels.rho.x, m.kernels.rho.y};
    j["psi_adj"] = {m.kernels.psi_adj.x, m.kernels.psi_adj.y};
    j["w21"] = {m.w21.x, m.w21.y};
    j["params"] = params_to_json(m.np_run);
    j["solvability_residual"] = m.solvability_residual;

    nlohmann::json recon;
    recon["n_modes"] = m.recon.n_modes;
    recon["phi_x"] = m.recon.phi_x;
    recon["phi_y"] = m.recon.phi_y;
    recon["rho"] = {m.recon.rho.x, m.recon.rho.y};
    nlohmann::json w2 = nlohmann::json::array();
    for (const auto& t : m.recon.w2) {
        nlohmann::json jt;
        jt["p"] = t.p;
        jt["q"] = t.q;
        jt["phi_x"] = t.phi_x;
        jt["phi_y"] = t.phi_y;
        nlohmann::json monos = nlohmann::json::array();
        for (const auto& mono : t.monos)
            monos.push_back({{"i", mono.i}, {"j", mono.j}, {"u", mono.u}, {"v", mono.v}});
        jt["monos"] = monos;
        w2.push_back(jt);
    }
    recon["w2"] = w2;
    j["recon"] = recon;
    return j;
}

AmplitudeModel amplitude_model_from_json(const nlohmann::json& j) {
    AmplitudeModel m;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "cubic_sl") m.kind = AmplitudeKind::cubic_sl;
    else if (kind == "gl") m.kind = AmplitudeKind::gl;
    else if (kind == "quintic_sl") m.kind = AmplitudeKind::quintic_sl;
    else if (kind == "coupled") m.kind = AmplitudeKind::coupled;
    else if (kind == "resonant") m.kind = AmplitudeKind::resonant;
    else throw std::invalid_argument("unknown amplitude model kind: " + kind);

    m.sigma = j.value("sigma", 0.0);
    m.L = j.value("L", 0.0);
    m.nu = j.value("nu", 0.0);
    m.sigma4 = j.value("sigma4", 0.0);
    m.L4 = j.value("L4", 0.0);
    m.R4 = j.value("R4", 0.0);
    m.sigma_bar = j.value("sigma_bar", 0.0);
    m.L_bar = j.value("L_bar", 0.0);
    m.R_bar = j.value("R_bar", 0.0);
    m.L1 = j.value("L1", 0.0);
    m.L2 = j.value("L2", 0.0);
    m.R1 = j.value("R1", 0.0);
    m.R2 = j.value("R2", 0.0);
    m.sigma1 = j.value("sigma1", 0.0);
    m.sigma2 = j.value("sigma2", 0.0);
    m.S1 = j.value("S1", 0.0);
    m.S2 = j.value("S2", 0.0);
    m.b_crit = j.value("b_crit", 0.0);
    m.k2c = j.value("k2c", 0.0);
    m.epsilon = j.value("epsilon", 0.0);
    m.amp_scale = j.value("amp_scale", 0.0);
    if (j.contains("rho")) m.kernels.rho = {j["rho"][0].get<double>(), j["rho"][1].get<double>()};
    if (j.contains("psi_adj"))
        m.kernels.psi_adj = {j["psi_adj"][0].get<double>(), j["psi_adj"][1].get<double>()};
    if (j.contains("w21")) m.w21 = {j["w21"][0].get<double>(), j["w21"][1].get<double>()};
    if (j.contains("params")) m.np_run = params_from_json(j["params"]);
    m.solvability_residual = j.value("solvability_residual", 0.0);

    if (j.contains("recon")) {
        const auto& r = j["recon"];
        m.recon.n_modes = r.value("n_modes", 1);
        m.recon.phi_x = r.value("phi_x", std::vector<double>{});
        m.recon.phi_y = r.value("phi_y", std::vector<double>{});
        if (r.contains("rho"))
            m.recon.rho = {r["rho"][0].get<double>(), r["rho"][1].get<double>()};
        if (r.contains("w2")) {
            for (const auto& jt : r["w2"]) {
                W2Term t;
                t.p = jt.value("p", 0);
                t.q = jt.value("q", 0);
                t.phi_x = jt.value("phi_x", 0.0);
                t.phi_y = jt.value("phi_y", 0.0);
                for (const auto& jm : jt["monos"]) {
                    W2Term::Mono mono;
                    mono.i = jm.value("i", 0);
                    mono.j = jm.value("j", 0);
                    mono.u = jm.value("u", 0.0);
                    mono.v = jm.value("v", 0.0);
                    t.monos.push_back(mono);
                }
                m.recon.w2.push_back(std::move(t));
            }
        }
    }
    return m;
}

}  // namespace bruss
