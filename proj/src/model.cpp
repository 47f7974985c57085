#include "bruss/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "bruss/rational.hpp"

namespace bruss {

namespace {

void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

void require_nonneg(double x, const char* name) {
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string(name) + " must be nonnegative and finite");
}

}  // namespace

void PhysicalParams::validate() const {
    require_positive(D_u, "D_u");
    require_positive(D_v, "D_v");
    require_positive(u0, "u0");
    require_positive(v0, "v0");
    require_positive(a, "a");
    require_positive(b, "b");
    require_positive(Gamma, "Gamma");
    require_nonneg(m, "m");
    require_nonneg(n, "n");
}

void NondimParams::validate() const {
    require_positive(Q, "Q");
    require_positive(eta, "eta");
    require_positive(b, "b");
    require_positive(Gamma, "Gamma");
    require_nonneg(m, "m");
    require_nonneg(n, "n");
}

NondimResult nondimensionalize(const PhysicalParams& p) {
    p.validate();
    const double num = (p.m + 1.0) * p.D_v * std::pow(p.u0, p.m);
    const double den = (p.n + 1.0) * p.D_u * std::pow(p.v0, p.n);
    const double u_star = std::pow(num / den, 1.0 / (p.m + p.n + 2.0));
    const double v_star = 1.0 / u_star;
    const double x_star =
        std::sqrt(p.D_v / ((p.n + 1.0) * std::pow(p.v0, p.n) * std::pow(u_star, p.n + 2.0)));

    NondimResult r;
    r.scales = {u_star, v_star, x_star};
    r.params.eta = 1.0 / u_star;
    r.params.Q = p.a / u_star;
    r.params.b = p.b;
    r.params.Gamma = p.Gamma;
    r.params.m = p.m;
    r.params.n = p.n;
    r.params.validate();
    return r;
}

double redimensionalize_a(const NondimParams& np) {
    return np.Q / np.eta;
}

Vec2 kinetics(const NondimParams& np, double u, double v) {
    const double common = u * u * v;
    const double f = np.Gamma * (np.Q - (np.b + 1.0) * u + common);
    const double g = np.Gamma / np.eta2() * (np.b * u - common);
    return {f, g};
}

SteadyState steady_state(const NondimParams& np) {
    return {np.Q, np.b / np.Q};
}

NondimParams params_from_json(const nlohmann::json& j) {
    if (j.contains("physical")) {
        const auto& jp = j.at("physical");
        PhysicalParams p;
        p.D_u = jp.at("D_u").get<double>();
        p.D_v = jp.at("D_v").get<double>();
        p.u0 = jp.value("u0", 1.0);
        p.v0 = jp.value("v0", 1.0);
        p.a = jp.at("a").get<double>();
        p.b = jp.at("b").get<double>();
        p.Gamma = jp.at("Gamma").get<double>();
        p.m = jp.value("m", 0.0);
        p.n = jp.value("n", 0.0);
        return nondimensionalize(p).params;
    }
    NondimParams np;
    const double Q2 = j.at("Q2").get<double>();
    const double eta2 = j.at("eta2").get<double>();
    if (!(Q2 > 0.0) || !(eta2 > 0.0))
        throw std::invalid_argument("Q2 and eta2 must be positive");
    np.Q = std::sqrt(Q2);
    np.eta = std::sqrt(eta2);
    np.b = j.value("b", 1.0);
    np.Gamma = j.at("Gamma").get<double>();
    np.m = j.value("m", 0.0);
    np.n = j.value("n", 0.0);
    np.validate();
    return np;
}

nlohmann::json params_to_json(const NondimParams& np) {
    return nlohmann::json{{"Q2", np.Q2()}, {"eta2", np.eta2()}, {"b", np.b},
                          {"Gamma", np.Gamma}, {"m", np.m},     {"n", np.n}};
}

Vec2 solve2_pinv(const Mat2& M, const Vec2& rhs, const Vec2& gauge) {
    // Solve min ||M x - rhs|| subject to dot(x, gauge) = 0 by substituting
    // x = t * g_perp with g_perp orthogonal to gauge.
    const Vec2 g_perp{-gauge.y, gauge.x};
    const Vec2 Mg = M * g_perp;
    const double denom = dot(Mg, Mg);
    if (denom < 1e-300)
        throw std::domain_error("solve2_pinv: degenerate gauge direction");
    const double t = dot(Mg, rhs) / denom;
    return g_perp * t;
}

Surd parse_pi_multiple(const std::string& text) {
    // grammar: factor ('*' factor)* ('/' integer)?  where factor is an
    // integer, integer/integer, or sqrt(3)
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty length expression");

    Surd out(Rational(1), 0);
    std::size_t pos = 0;
    bool expect_factor = true;
    while (pos < s.size()) {
        if (!expect_factor) {
            if (s[pos] == '*') {
                ++pos;
                expect_factor = true;
                continue;
            }
            if (s[pos] == '/') {
                ++pos;
                std::size_t start = pos;
                while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (start == pos) throw std::invalid_argument("bad length expression: " + text);
                out = out * Rational(1, std::stoll(s.substr(start, pos - start)));
                continue;
            }
            throw std::invalid_argument("bad length expression: " + text);
        }
        if (s.compare(pos, 7, "sqrt(3)") == 0) {
            out = out * Surd(Rational(1), 1);
            pos += 7;
        } else {
            std::size_t start = pos;
            while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            if (start == pos) throw std::invalid_argument("bad length expression: " + text);
            std::int64_t num = std::stoll(s.substr(start, pos - start));
            std::int64_t den = 1;
            if (pos < s.size() && s[pos] == '/' && pos + 1 < s.size() &&
                isdigit(static_cast<unsigned char>(s[pos + 1]))) {
                ++pos;
                start = pos;
                while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                den = std::stoll(s.substr(start, pos - start));
            }
            out = out * Rational(num, den);
        }
        expect_factor = false;
    }
    if (expect_factor) throw std::invalid_argument("bad length expression: " + text);
    if (out.is_zero()) throw std::invalid_argument("length must be nonzero: " + text);
    return out;
}

}  // namespace bruss
