// Parameter handling for the Brusselator with density-dependent diffusion:
//
//   u_t = dxx(u^{m+1}) + Gamma (Q - (b+1) u + u^2 v),
//   v_t = (1/eta^2) dxx(v^{n+1}) + (Gamma/eta^2) (b u - u^2 v),
//
// which is the rescaled form of the physical system
//
//   U_t = D_u d/dz ((U/u0)^m dU/dz) + Gamma (a - (b+1) U + U^2 V),
//   V_t = D_v d/dz ((V/v0)^n dV/dz) + Gamma (b U - U^2 V).
//
// All downstream analyses consume the nondimensional form; the physical
// form is an optional entry path.
#pragma once

#include <nlohmann/json_fwd.hpp>

#include "bruss/types.hpp"

namespace bruss {

struct PhysicalParams {
    double D_u = 1.0;   // activator diffusion coefficient, > 0
    double D_v = 1.0;   // inhibitor diffusion coefficient, > 0
    double u0 = 1.0;    // activator threshold concentration, > 0
    double v0 = 1.0;    // inhibitor threshold concentration, > 0
    double a = 1.0;     // kinetic constant, > 0
    double b = 1.0;     // kinetic constant (bifurcation parameter), > 0
    double Gamma = 1.0; // reaction strength, > 0
    double m = 0.0;     // activator diffusion exponent, >= 0
    double n = 0.0;     // inhibitor diffusion exponent, >= 0

    void validate() const;
};

struct NondimParams {
    double Q = 1.0;     // > 0
    double eta = 1.0;   // > 0
    double b = 1.0;     // bifurcation parameter, > 0
    double Gamma = 1.0; // > 0
    double m = 0.0;     // >= 0
    double n = 0.0;     // >= 0

    double Q2() const { return Q * Q; }
    double eta2() const { return eta * eta; }
    NondimParams with_b(double b_new) const {
        NondimParams np = *this;
        np.b = b_new;
        return np;
    }
    void validate() const;
};

struct Scales {
    double u_star = 1.0;
    double v_star = 1.0;
    double x_star = 1.0;
};

struct SteadyState {
    double u_bar = 0.0;
    double v_bar = 0.0;
};

struct NondimResult {
    NondimParams params;
    Scales scales;
};

// U = u* u, V = v* v, zeta = x* x with
//   u* = ((m+1) D_v u0^m / ((n+1) D_u v0^n))^(1/(m+n+2)),
//   v* = 1/u*,  x* = sqrt(D_v / ((n+1) v0^n u*^(n+2))),
// giving Q = a eta and eta = 1/u*.
NondimResult nondimensionalize(const PhysicalParams& p);

// Inverse of nondimensionalize on the kinetic constants: recovers `a`
// given the nondimensional parameters and the scales.
double redimensionalize_a(const NondimParams& np);

// The reaction terms of the rescaled system, evaluated at (u, v):
//   f = Gamma (Q - (b+1) u + u^2 v),  g = (Gamma/eta^2) (b u - u^2 v).
Vec2 kinetics(const NondimParams& np, double u, double v);

// The only nontrivial homogeneous stationary solution, (Q, b/Q).
SteadyState steady_state(const NondimParams& np);

// Reads parameters from a JSON object with either squared nondimensional
// keys {"Q2", "eta2", "b", "Gamma", "m", "n"} (the form every figure
// caption uses) or a {"physical": {...}} block.
NondimParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const NondimParams& np);

}  // namespace bruss
