#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "bruss/amplitude.hpp"
#include "bruss/linstab.hpp"

using namespace bruss;

namespace {

AmplitudeModel cubic(double sigma, double L) {
    AmplitudeModel m;
    m.kind = AmplitudeKind::cubic_sl;
    m.sigma = sigma;
    m.L = L;
    return m;
}

AmplitudeModel fig33_quintic(double eps = 0.02) {
    NondimParams np;
    np.Q = std::sqrt(0.14);
    np.eta = 0.6;
    np.Gamma = 150.0;
    np.m = 1.0;
    np.n = 1.0;
    const Domain dom = Domain::line(parse_pi_multiple("2"));
    const ModeSet ms = select_critical_modes(np, dom);
    const CriticalPoint cp = mode_critical_point(np, ms.k2.value());
    np.b = cp.b_crit * (1.0 + eps * eps);
    return quintic_coeffs(np, dom);
}

AmplitudeModel fig43_coupled() {
    NondimParams np;
    np.Q = std::sqrt(8.0);
    np.eta = 0.6;
    np.Gamma = 11.93;
    np.m = 1.0;
    np.n = 1.0;
    const Domain dom = Domain::rectangle(parse_pi_multiple("2"), parse_pi_multiple("2"));
    const CriticalPoint cp = mode_critical_point(np, 5.0);
    np.b = cp.b_crit * (1.0 + 0.03 * 0.03);
    return coupled_landau_coeffs(np, dom);
}

AmplitudeModel fig44_resonant() {
    NondimParams np;
    np.Q = 2.0;
    np.eta = std::sqrt(0.3025);
    np.Gamma = 23.054;
    np.m = 1.0;
    np.n = 1.0;
    const Domain dom =
        Domain::rectangle(parse_pi_multiple("2"), parse_pi_multiple("2*sqrt(3)"));
    const CriticalPoint cp = mode_critical_point(np, 9.0);
    np.b = cp.b_crit * (1.0 + 0.01 * 0.01);
    return resonant_coeffs(np, dom);
}

}  // namespace

TEST_CASE("cubic Stuart-Landau saturates at sqrt(sigma/L)") {
    const AmplitudeModel m = cubic(4.0, 1.0);
    const Trajectory tr = integrate_amplitude(m, {0.01}, 20.0);
    CHECK(!tr.diverged);
    CHECK(tr.states.back().values[0] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("cubic with L<0 diverges from a small seed") {
    const AmplitudeModel m = cubic(1.0, -1.0);
    const Trajectory tr = integrate_amplitude(m, {0.01}, 50.0);
    CHECK(tr.diverged);
}

TEST_CASE("quintic converges to the positive stationary root") {
    AmplitudeModel m;
    m.kind = AmplitudeKind::quintic_sl;
    m.sigma_bar = 1.0;
    m.L_bar = -2.0;
    m.R_bar = -1.0;
    // stationary X = A^2 solves -X^2 + 2X + 1 = 0 -> X = 1 + sqrt(2)
    const double A_expect = std::sqrt(1.0 + std::sqrt(2.0));
    const Trajectory tr = integrate_amplitude(m, {0.05}, 60.0);
    CHECK(!tr.diverged);
    CHECK(tr.states.back().values[0] == doctest::Approx(A_expect).epsilon(1e-7));
}

TEST_CASE("sl_equilibrium basics") {
    Equilibrium eq = sl_equilibrium(cubic(1.0, 4.0));
    CHECK(eq.values[0] == doctest::Approx(0.5));
    CHECK(eq.stability == Stability::stable);
    CHECK(eq.eigenvalues[0].real() == doctest::Approx(-2.0));

    eq = sl_equilibrium(cubic(0.0, 4.0));
    CHECK(eq.values[0] == 0.0);
    CHECK(eq.stability == Stability::marginal);

    CHECK_THROWS_AS(sl_equilibrium(cubic(1.0, -4.0)), std::domain_error);
    CHECK_THROWS_AS(sl_equilibrium(cubic(1.0, 0.0)), std::domain_error);
}

TEST_CASE("quintic bifurcation diagram reproduces the subcritical window") {
    const AmplitudeModel m = fig33_quintic();
    const BifurcationDiagram d = quintic_diagram(m, 1.255, 1.268, 261);
    REQUIRE(d.has_saddle_node);
    CHECK(d.b_s == doctest::Approx(1.2634).epsilon(1e-3));
    CHECK(d.b_s < d.b_c);
    CHECK(d.b_c == doctest::Approx(1.2645).epsilon(1e-3));

    for (const auto& p : d.upper) CHECK(p.residual < 1e-10 * (1.0 + std::abs(m.sigma)));
    for (const auto& p : d.middle) CHECK(p.residual < 1e-10 * (1.0 + std::abs(m.sigma)));

    // origin stable below b^c, unstable above
    for (const auto& p : d.origin) {
        if (p.b < d.b_c - 1e-6) CHECK(p.stability == Stability::stable);
        if (p.b > d.b_c + 1e-6) CHECK(p.stability == Stability::unstable);
    }
    // between b^s and b^c: upper branch stable, middle branch unstable
    bool saw_bistable = false;
    for (const auto& p : d.upper) {
        if (p.b > d.b_s && p.b < d.b_c) {
            CHECK(p.stability == Stability::stable);
            saw_bistable = true;
        }
    }
    CHECK(saw_bistable);
    for (const auto& p : d.middle) CHECK(p.stability == Stability::unstable);
    // below b^s: no nontrivial branches
    for (const auto& p : d.upper) CHECK(p.b > d.b_s - 1e-9);
}

TEST_CASE("upper branch is insensitive to b inside the hysteresis window") {
    const AmplitudeModel m = fig33_quintic();
    const BifurcationDiagram d = quintic_diagram(m, 1.2630, 1.2660, 121);
    double lo = 1e300, hi = 0.0;
    for (const auto& p : d.upper) {
        if (p.b >= d.b_s && p.b <= d.b_c) {
            lo = std::min(lo, p.amplitude);
            hi = std::max(hi, p.amplitude);
        }
    }
    REQUIRE(hi > 0.0);
    CHECK((hi - lo) / hi < 0.10);
}

TEST_CASE("quintic branch amplitude scales like 1/eps") {
    double prev_scaled = 0.0;
    for (double eps : {0.1, 0.05, 0.025}) {
        const AmplitudeModel m = fig33_quintic(eps);
        const QuinticAt q = quintic_at(m, m.np_run.b);
        const double disc = q.L_bar * q.L_bar - 4.0 * q.R_bar * q.sigma_bar;
        REQUIRE(disc > 0.0);
        const double X = (q.L_bar - std::sqrt(disc)) / (2.0 * q.R_bar);
        REQUIRE(X > 0.0);
        const double scaled = std::sqrt(X) * eps;
        CHECK(scaled > 0.01);
        CHECK(scaled < 10.0);
        if (prev_scaled != 0.0) CHECK(scaled == doctest::Approx(prev_scaled).epsilon(0.3));
        prev_scaled = scaled;
    }
}

TEST_CASE("hysteresis cycle: jump up, persist, collapse, re-jump") {
    const AmplitudeModel m = fig33_quintic();
    const BifurcationDiagram d = quintic_diagram(m, 1.256, 1.268, 25);
    REQUIRE(d.has_saddle_node);
    const double b_above = m.b_crit * (1.0 + 4e-4);
    const double b_mid = 0.5 * (d.b_s + d.b_c);
    const double b_below = d.b_s - 0.002;
    const auto legs =
        hysteresis_sweep(m, {b_above, b_mid, b_below, b_mid, b_above}, 1e-3);
    REQUIRE(legs.size() == 5);
    CHECK(legs[0].amplitude > 1.0);  // jump up above b^c
    CHECK(legs[1].amplitude > 1.0);  // persists in (b^s, b^c)
    CHECK(legs[1].amplitude == doctest::Approx(legs[0].amplitude).epsilon(0.15));
    CHECK(legs[2].amplitude < 0.1);  // collapse below b^s
    CHECK(legs[3].amplitude < 0.1);  // stays down: hysteresis
    CHECK(legs[4].amplitude ==
          doctest::Approx(legs[0].amplitude).epsilon(0.15));  // re-jump
}

TEST_CASE("path that never exceeds b^c keeps the amplitude at the noise floor") {
    const AmplitudeModel m = fig33_quintic();
    const double b1 = m.b_crit * (1.0 - 5e-4);
    const double b2 = m.b_crit * (1.0 - 2e-3);
    const auto legs = hysteresis_sweep(m, {b1, b2, b1}, 1e-3);
    for (const auto& leg : legs) CHECK(leg.amplitude < 2e-3);
}

TEST_CASE("coupled equilibria: axis state matches the reduced Stuart-Landau") {
    const AmplitudeModel m = fig43_coupled();
    const auto eqs = coupled_equilibria(m);
    bool found_axis = false, found_mixed = false;
    int stable_count = 0;
    for (const auto& eq : eqs) {
        CHECK(eq.residual < 1e-10 * (1.0 + std::abs(m.sigma)));
        if (eq.name == "rhombic_1") {
            found_axis = true;
            CHECK(eq.values[0] == doctest::Approx(std::sqrt(m.sigma / m.L1)).epsilon(1e-12));
        }
        if (eq.name == "mixed") {
            found_mixed = true;
            CHECK(eq.values[0] > 0.0);
            CHECK(eq.values[1] > 0.0);
        }
        if (eq.stability == Stability::stable) ++stable_count;
    }
    CHECK(found_axis);
    CHECK(found_mixed);
    // fig 4.3: the only stable equilibrium has both coordinates nonzero
    CHECK(stable_count == 1);
    for (const auto& eq : eqs)
        if (eq.stability == Stability::stable) CHECK(eq.name == "mixed");
}

TEST_CASE("stable equilibria persist under integration, unstable ones depart") {
    const AmplitudeModel m = fig43_coupled();
    for (const auto& eq : coupled_equilibria(m)) {
        if (eq.stability == Stability::stable) {
            const Trajectory tr = integrate_amplitude(m, eq.values, 100.0);
            CHECK(!tr.diverged);
            for (std::size_t i = 0; i < eq.values.size(); ++i)
                CHECK(std::abs(tr.states.back().values[i] - eq.values[i]) < 1e-6);
        } else {
            std::vector<double> init = eq.values;
            for (double& v : init) v += 1e-4;
            const Trajectory tr = integrate_amplitude(m, init, 200.0);
            double dist = 0.0;
            for (std::size_t i = 0; i < eq.values.size(); ++i)
                dist = std::max(dist, std::abs(tr.states.back().values[i] - eq.values[i]));
            CHECK(dist > 1e-3);
        }
    }
}

TEST_CASE("hexagon equilibria: residuals and fig 4.4 stability pattern") {
    const AmplitudeModel m = fig44_resonant();
    const auto eqs = hexagon_equilibria(m);
    REQUIRE(eqs.size() >= 3);

    for (const auto& eq : eqs) {
        const double scale =
            (std::abs(m.sigma1) + std::abs(m.L1) * std::abs(eq.values[1])) *
                (1.0 + std::abs(eq.values[0])) +
            1.0;
        CHECK(eq.residual < 1e-9 * scale);
    }

    // only the H1 hexagon pair is stable; rolls R+- and the origin are not
    int stable_hex = 0;
    for (const auto& eq : eqs) {
        if (eq.stability == Stability::stable) {
            CHECK(eq.name.substr(0, 1) == "H");
            ++stable_hex;
        }
    }
    CHECK(stable_hex == 2);  // the +-A1 mirror pair of one hexagon state
}

TEST_CASE("cubic-in-A2 roots match a scan-and-bisect oracle") {
    const AmplitudeModel m = fig44_resonant();
    const double c3 = m.S1 * m.S2 - m.R1 * m.R2;
    const double c2 = m.L1 * m.R2 + m.L2 * m.R1;
    const double c1 = m.S1 * m.sigma2 - m.L1 * m.L2 - m.R2 * m.sigma1;
    const double c0 = m.L2 * m.sigma1;
    const auto roots = real_cubic_roots(c3, c2, c1, c0);

    // oracle: Horner evaluation in long double, dense scan plus bisection
    auto poly = [&](long double x) {
        return ((static_cast<long double>(c3) * x + c2) * x + c1) * x + c0;
    };
    std::vector<double> oracle;
    const double span =
        2.0 * (1.0 + std::abs(c2 / c3) + std::abs(c1 / c3) + std::abs(c0 / c3));
    long double prev_x = -span, prev_f = poly(prev_x);
    const int n_scan = 400000;
    for (int i = 1; i <= n_scan; ++i) {
        const long double x = -span + 2.0 * span * i / n_scan;
        const long double f = poly(x);
        if ((prev_f < 0.0L) != (f < 0.0L)) {
            long double lo = prev_x, hi = x, flo = prev_f;
            for (int it = 0; it < 100; ++it) {
                const long double mid = 0.5L * (lo + hi);
                const long double fm = poly(mid);
                if ((fm < 0.0L) == (flo < 0.0L)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            oracle.push_back(static_cast<double>(0.5L * (lo + hi)));
        }
        prev_x = x;
        prev_f = f;
    }
    REQUIRE(oracle.size() == roots.size());
    std::vector<double> sorted = roots;
    std::sort(sorted.begin(), sorted.end());
    std::sort(oracle.begin(), oracle.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        CHECK(sorted[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
}

TEST_CASE("zeroing the quadratic terms reduces the resonant rhs to coupled form") {
    AmplitudeModel m = fig44_resonant();
    m.L1 = 0.0;
    m.L2 = 0.0;
    AmplitudeModel c;
    c.kind = AmplitudeKind::coupled;
    c.sigma = m.sigma1;
    c.L1 = -m.S1;
    c.R1 = m.R1;
    c.L2 = -m.S2;
    c.R2 = m.R2;
    std::vector<double> dA_res, dA_cpl;
    const std::vector<double> A{0.7, -0.4};
    amplitude_rhs(m, nullptr, A, dA_res);
    amplitude_rhs(c, nullptr, A, dA_cpl);
    CHECK(dA_res[0] == doctest::Approx(dA_cpl[0]).epsilon(1e-12));
    // the A2 equations differ in the quadratic -L2 A1^2 term only, removed here
    CHECK(dA_res[1] == doctest::Approx(dA_cpl[1]).epsilon(1e-12));
}

TEST_CASE("GL with uniform initial data reproduces the cubic trajectory") {
    AmplitudeModel m;
    m.kind = AmplitudeKind::gl;
    m.sigma = 3.0;
    m.L = 2.0;
    m.nu = 1.5;
    GlGrid grid{2.0, 32};
    OdeOptions opts;
    opts.rtol = 1e-11;
    opts.atol = 1e-13;
    const Trajectory tr =
        integrate_amplitude(m, std::vector<double>(grid.N, 0.05), 4.0, 0.0, &grid, opts);

    AmplitudeModel c = cubic(3.0, 2.0);
    const Trajectory tc = integrate_amplitude(c, {0.05}, 4.0, 0.0, nullptr, opts);
    const double A_end = tc.states.back().values[0];
    for (double v : tr.states.back().values)
        CHECK(v == doctest::Approx(A_end).epsilon(1e-8));
}

TEST_CASE("degenerate resonant coefficients are rejected") {
    AmplitudeModel m = fig44_resonant();
    m.S2 = 0.0;
    CHECK_THROWS_AS(hexagon_equilibria(m), std::domain_error);
}
