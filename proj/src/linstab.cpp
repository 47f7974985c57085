#include "bruss/linstab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace bruss {

namespace {

constexpr double kPi = 3.14159265358979323846;

// det K simplifies to Q^2/eta^2 for all b.
double det_K(const NondimParams& np) { return np.Q2() / np.eta2(); }

double det_D(const NondimParams& np) {
    return (np.m + 1.0) * std::pow(np.Q, np.m) * (np.n + 1.0) / np.eta2() *
           std::pow(np.b / np.Q, np.n);
}

double q_of(const NondimParams& np) {
    return ((1.0 - np.b) * (np.n + 1.0) * std::pow(np.b / np.Q, np.n) +
            (np.m + 1.0) * std::pow(np.Q, np.m + 2.0)) /
           np.eta2();
}

double dq_db(const NondimParams& np) {
    const double r = np.b / np.Q;
    return (np.n + 1.0) *
           (-std::pow(r, np.n) + (1.0 - np.b) * np.n * std::pow(r, np.n - 1.0) / np.Q) /
           np.eta2();
}

// discriminant q^2 - 4 det(D) det(K); zero on the Turing neutral envelope
double discr(const NondimParams& np) {
    const double q = q_of(np);
    return q * q - 4.0 * det_D(np) * det_K(np);
}

}  // namespace

Linearization linearize(const NondimParams& np) {
    np.validate();
    Linearization lin;
    lin.K = Mat2{np.b - 1.0, np.Q2(), -np.b / np.eta2(), -np.Q2() / np.eta2()};
    lin.D = Mat2::diag((np.m + 1.0) * std::pow(np.Q, np.m),
                       (np.n + 1.0) / np.eta2() * std::pow(np.b / np.Q, np.n));
    lin.q = -lin.K.a * lin.D.d - lin.K.d * lin.D.a;
    return lin;
}

Mat2 mode_matrix(const NondimParams& np, double k2) {
    const Linearization lin = linearize(np);
    return lin.K * np.Gamma - lin.D * k2;
}

DispersionSample growth_rates(const NondimParams& np, double k2) {
    if (k2 < 0.0) throw std::invalid_argument("growth_rates: k2 must be nonnegative");
    const Linearization lin = linearize(np);
    DispersionSample s;
    s.k2 = k2;
    s.g_val = k2 * lin.D.trace() - np.Gamma * lin.K.trace();
    s.h_val = lin.D.det() * k2 * k2 + np.Gamma * lin.q * k2 + np.Gamma * np.Gamma * lin.K.det();
    const std::complex<double> disc(s.g_val * s.g_val - 4.0 * s.h_val, 0.0);
    const std::complex<double> root = std::sqrt(disc);
    s.roots[0] = 0.5 * (-s.g_val + root);
    s.roots[1] = 0.5 * (-s.g_val - root);
    if (s.roots[1].real() > s.roots[0].real()) std::swap(s.roots[0], s.roots[1]);
    return s;
}

double hopf_threshold(const NondimParams& np) {
    np.validate();
    return 1.0 + np.Q2() / np.eta2();
}

Thresholds turing_threshold(const NondimParams& np) {
    np.validate();
    // q(b) is positive at b = 1 and must change sign for a Turing branch to
    // exist; beyond the q = 0 point the discriminant rises from a negative
    // value through zero at b^c.
    auto q_at = [&](double b) { return q_of(np.with_b(b)); };
    auto discr_at = [&](double b) { return discr(np.with_b(b)); };

    double b_lo = 1.0, b_hi = 2.0;
    if (q_at(b_lo) <= 0.0) throw std::domain_error("no Turing branch: q(1) <= 0");
    while (q_at(b_hi) > 0.0) {
        b_lo = b_hi;
        b_hi *= 2.0;
        if (b_hi > 1e12) throw std::domain_error("no Turing branch: q stays positive");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (b_lo + b_hi);
        (q_at(mid) > 0.0 ? b_lo : b_hi) = mid;
    }
    const double b_q = b_hi;  // q < 0 from here on

    b_lo = b_q;
    b_hi = std::max(2.0 * b_q, b_q + 1.0);
    while (discr_at(b_hi) < 0.0) {
        b_lo = b_hi;
        b_hi *= 2.0;
        if (b_hi > 1e12) throw std::domain_error("no Turing branch: discriminant stays negative");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (b_lo + b_hi);
        (discr_at(mid) < 0.0 ? b_lo : b_hi) = mid;
    }

    double b_c = 0.5 * (b_lo + b_hi);
    // Newton polish on the discriminant; its derivative is smooth and
    // nonzero at the simple root.
    for (int i = 0; i < 8; ++i) {
        const double f = discr_at(b_c);
        const double h = std::max(1e-7, 1e-7 * b_c);
        const double fp = (discr_at(b_c + h) - discr_at(b_c - h)) / (2.0 * h);
        if (fp == 0.0) break;
        const double step = f / fp;
        b_c -= step;
        if (std::abs(step) < 1e-15 * b_c) break;
    }

    Thresholds th;
    th.b_hopf = hopf_threshold(np);
    th.b_turing = b_c;
    const NondimParams at_c = np.with_b(b_c);
    th.kc2 = -np.Gamma * q_of(at_c) / (2.0 * det_D(at_c));
    return th;
}

CriticalPoint turing_critical_point(const NondimParams& np) {
    const Thresholds th = turing_threshold(np);
    // Newton on (y, b), y = kc^2:
    //   F1 = detD y^2 + Gamma q y + Gamma^2 detK = 0   (on the neutral curve)
    //   F2 = 2 detD y + Gamma q = 0                    (curve minimum)
    double y = th.kc2;
    double b = th.b_turing;
    const double G = np.Gamma;
    for (int i = 0; i < 30; ++i) {
        const NondimParams at = np.with_b(b);
        const double dD = det_D(at), dK = det_K(at), q = q_of(at);
        const double dDb = dD * np.n / b;  // d(detD)/db
        const double qb = dq_db(at);
        const double F1 = dD * y * y + G * q * y + G * G * dK;
        const double F2 = 2.0 * dD * y + G * q;
        const double J11 = F2;                    // dF1/dy
        const double J12 = dDb * y * y + G * qb * y;  // dF1/db
        const double J21 = 2.0 * dD;              // dF2/dy
        const double J22 = 2.0 * dDb * y + G * qb;    // dF2/db
        const double det = J11 * J22 - J12 * J21;
        if (det == 0.0) break;
        const double dy = (F1 * J22 - J12 * F2) / det;
        const double db = (J11 * F2 - F1 * J21) / det;
        y -= dy;
        b -= db;
        if (std::abs(dy) < 1e-14 * std::abs(y) && std::abs(db) < 1e-14 * b) break;
    }
    CriticalPoint cp;
    cp.np = np.with_b(b);
    cp.b_crit = b;
    cp.k2 = y;
    return cp;
}

CriticalPoint mode_critical_point(const NondimParams& np, double k2) {
    if (!(k2 > 0.0)) throw std::invalid_argument("mode_critical_point: k2 must be positive");
    auto h_at = [&](double b) {
        const NondimParams at = np.with_b(b);
        return det_D(at) * k2 * k2 + np.Gamma * q_of(at) * k2 +
               np.Gamma * np.Gamma * det_K(at);
    };
    double b_lo = 1.0;
    if (h_at(b_lo) <= 0.0) throw std::domain_error("mode_critical_point: mode unstable at b = 1");
    double b_hi = 2.0;
    while (h_at(b_hi) > 0.0) {
        b_lo = b_hi;
        b_hi *= 2.0;
        if (b_hi > 1e12)
            throw std::domain_error("mode_critical_point: mode never becomes neutral");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (b_lo + b_hi);
        (h_at(mid) > 0.0 ? b_lo : b_hi) = mid;
    }
    double b = 0.5 * (b_lo + b_hi);
    for (int i = 0; i < 8; ++i) {
        const double f = h_at(b);
        const double h = std::max(1e-7, 1e-7 * b);
        const double fp = (h_at(b + h) - h_at(b - h)) / (2.0 * h);
        if (fp == 0.0) break;
        const double step = f / fp;
        b -= step;
        if (std::abs(step) < 1e-15 * b) break;
    }
    CriticalPoint cp;
    cp.np = np.with_b(b);
    cp.b_crit = b;
    cp.k2 = k2;
    return cp;
}

std::optional<std::pair<double, double>> unstable_band(const NondimParams& np) {
    const double q = q_of(np);
    const double disc = discr(np);
    if (disc <= 0.0 || q >= 0.0) return std::nullopt;
    const double dD = det_D(np);
    const double s = std::sqrt(disc);
    return std::make_pair(np.Gamma * (-q - s) / (2.0 * dD), np.Gamma * (-q + s) / (2.0 * dD));
}

// --- Domain / mode enumeration ----------------------------------------------

double Domain::Lx() const { return Lx_over_pi.value() * kPi; }
double Domain::Ly() const { return Ly_over_pi.value() * kPi; }

namespace {

// p pi / L with L = r sqrt(3)^e pi:  p/r * 3^(-e/2)
Surd axis_freq(int p, const Surd& L_over_pi) {
    if (p == 0) return Surd(Rational(0), 0);
    return Surd(Rational(p), 0) / L_over_pi;
}

}  // namespace

Surd Domain::freq_x(int p) const { return axis_freq(p, Lx_over_pi); }
Surd Domain::freq_y(int q) const {
    if (dims == 1) return Surd(Rational(0), 0);
    return axis_freq(q, Ly_over_pi);
}

Rational Domain::mode_k2(int p, int q) const {
    return freq_x(p).squared() + freq_y(q).squared();
}

namespace {

bool conditions_resonant(const ModePair& mi, const ModePair& mj) {
    // (res_si): phi_i + phi_j = phi_j and psi_i - psi_j = psi_j, i.e.
    // phi_i = 0, psi_i = 2 psi_j; or the mirrored pair phi_i = 2 phi_j,
    // psi_i = 0.
    const Surd two(Rational(2), 0);
    const bool first = mi.phi_x.is_zero() && mi.phi_y == two * mj.phi_y;
    const bool second = mi.phi_x == two * mj.phi_x && mi.phi_y.is_zero();
    return first || second;
}

}  // namespace

ModeSet admissible_modes(const NondimParams& np, const Domain& dom) {
    np.validate();
    const auto band = unstable_band(np);
    if (!band) throw std::domain_error("no admissible unstable mode: no unstable band at this b");

    const double k2_hi = band->second;
    const int p_max = static_cast<int>(std::floor(dom.Lx_over_pi.value() * std::sqrt(k2_hi))) + 1;
    const int q_max =
        dom.dims == 1
            ? 0
            : static_cast<int>(std::floor(dom.Ly_over_pi.value() * std::sqrt(k2_hi))) + 1;

    std::map<std::pair<std::int64_t, std::int64_t>, ModeSet> groups;
    for (int p = 0; p <= p_max; ++p) {
        for (int q = 0; q <= q_max; ++q) {
            if (p == 0 && q == 0) continue;
            const Rational k2 = dom.mode_k2(p, q);
            const DispersionSample ds = growth_rates(np, k2.value());
            if (!(ds.h_val < 0.0)) continue;  // h < 0 iff k1^2 < k^2 < k2^2
            ModePair mp{p, q, dom.freq_x(p), dom.freq_y(q), k2};
            auto& set = groups[{k2.num, k2.den}];
            set.k2 = k2;
            set.growth = ds.max_growth();
            set.modes.push_back(mp);
        }
    }
    if (groups.empty())
        throw std::domain_error("no admissible unstable mode: band contains no lattice point");

    const ModeSet* best = nullptr;
    for (const auto& [key, set] : groups) {
        if (!best || set.growth > best->growth) best = &set;
    }
    ModeSet out = *best;
    out.multiplicity = static_cast<int>(out.modes.size());
    out.resonance = Resonance::none;
    if (out.multiplicity == 2) {
        const auto& m0 = out.modes[0];
        const auto& m1 = out.modes[1];
        if (conditions_resonant(m0, m1) || conditions_resonant(m1, m0))
            out.resonance = Resonance::resonant;
    }
    return out;
}

// --- Sweeps ------------------------------------------------------------------

std::string region_label(Region r) {
    switch (r) {
        case Region::stable: return "stable";
        case Region::hopf: return "H";
        case Region::turing: return "T";
        case Region::turing_hopf: return "T-H";
    }
    return "?";
}

namespace {

Region classify(double b, double b_hopf, double b_turing) {
    const bool hopf = b > b_hopf;
    const bool turing = std::isfinite(b_turing) && b > b_turing;
    if (hopf && turing) return Region::turing_hopf;
    if (hopf) return Region::hopf;
    if (turing) return Region::turing;
    return Region::stable;
}

// b_turing as a function of Q^2 alone (eta- and Gamma-independent).
double b_turing_of_q2(const NondimParams& base, double q2) {
    NondimParams np = base;
    np.Q = std::sqrt(q2);
    try {
        return turing_threshold(np).b_turing;
    } catch (const std::domain_error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

double kc2_of_q2(const NondimParams& base, double q2) {
    NondimParams np = base;
    np.Q = std::sqrt(q2);
    try {
        return turing_threshold(np).kc2;
    } catch (const std::domain_error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

// Points where b_turing(Q^2) crosses the fixed b: scan the grid for sign
// changes of b_turing - b and refine each by bisection. No global
// monotonicity in Q^2 is assumed.
std::vector<double> turing_boundary_q2(const NondimParams& base, double b,
                                       const std::vector<double>& q2_grid) {
    std::vector<double> crossings;
    auto f = [&](double q2) {
        const double bt = b_turing_of_q2(base, q2);
        return std::isfinite(bt) ? bt - b : std::numeric_limits<double>::quiet_NaN();
    };
    for (std::size_t i = 0; i + 1 < q2_grid.size(); ++i) {
        double lo = q2_grid[i], hi = q2_grid[i + 1];
        double flo = f(lo), fhi = f(hi);
        if (!std::isfinite(flo) || !std::isfinite(fhi)) continue;
        if (flo == 0.0) crossings.push_back(lo);
        if (flo * fhi >= 0.0) continue;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (fm * flo <= 0.0) { hi = mid; } else { lo = mid; flo = fm; }
        }
        crossings.push_back(0.5 * (lo + hi));
    }
    return crossings;
}

}  // namespace

SweepResult sweep_eta2_q2(const NondimParams& base, const std::vector<double>& eta2_grid,
                          const std::vector<double>& q2_grid) {
    SweepResult res;
    res.axis1 = "eta2";
    res.axis2 = "Q2";

    for (double q2 : q2_grid) {
        const double bt = b_turing_of_q2(base, q2);
        const double kc2 = kc2_of_q2(base, q2);
        for (double eta2 : eta2_grid) {
            SweepPoint pt;
            pt.x1 = eta2;
            pt.x2 = q2;
            pt.b_hopf = 1.0 + q2 / eta2;
            pt.b_turing = bt;
            pt.kc2 = kc2;
            pt.region = classify(base.b, pt.b_hopf, bt);
            res.points.push_back(pt);
        }
    }
    std::sort(res.points.begin(), res.points.end(), [](const SweepPoint& a, const SweepPoint& b) {
        return a.x1 != b.x1 ? a.x1 < b.x1 : a.x2 < b.x2;
    });

    BoundaryCurve hopf{"hopf", {}};
    for (double eta2 : eta2_grid) hopf.points.emplace_back(eta2, eta2 * (base.b - 1.0));
    res.boundaries.push_back(std::move(hopf));

    BoundaryCurve turing{"turing", {}};
    for (double q2c : turing_boundary_q2(base, base.b, q2_grid)) {
        // eta-independent: a horizontal line Q^2 = const in the (eta^2, Q^2) plane
        turing.points.emplace_back(eta2_grid.front(), q2c);
        turing.points.emplace_back(eta2_grid.back(), q2c);
    }
    res.boundaries.push_back(std::move(turing));
    return res;
}

SweepResult sweep_q2_b(const NondimParams& base, const std::vector<double>& q2_grid,
                       const std::vector<double>& b_grid) {
    SweepResult res;
    res.axis1 = "Q2";
    res.axis2 = "b";

    BoundaryCurve hopf{"hopf", {}};
    BoundaryCurve turing{"turing", {}};
    for (double q2 : q2_grid) {
        const double bh = 1.0 + q2 / base.eta2();
        const double bt = b_turing_of_q2(base, q2);
        const double kc2 = kc2_of_q2(base, q2);
        hopf.points.emplace_back(q2, bh);
        if (std::isfinite(bt)) turing.points.emplace_back(q2, bt);
        for (double b : b_grid) {
            SweepPoint pt;
            pt.x1 = q2;
            pt.x2 = b;
            pt.b_hopf = bh;
            pt.b_turing = bt;
            pt.kc2 = kc2;
            pt.region = classify(b, bh, bt);
            res.points.push_back(pt);
        }
    }
    res.boundaries.push_back(std::move(hopf));
    res.boundaries.push_back(std::move(turing));
    return res;
}

}  // namespace bruss
