#pragma once

#include <limits>
#include <vector>

#include "frontlab/field.hpp"
#include "frontlab/geometry.hpp"

namespace frontlab {

/// Effective Hamiltonian H(p) = sup_{q in D} p.q and its Lagrangian, the
/// indicator of D (0 inside, +inf outside, with a tolerance band).
struct EffectiveModel {
  Polytope d;
  double band = 0.0;
};

double effective_hamiltonian(const EffectiveModel& model, const Vec& p);
double effective_lagrangian(const EffectiveModel& model, const Vec& q);

/// Lax-Oleinik solution u(x,t) = min { u0(y) : y in x - tD }, scanning the
/// lattice points of x - tD (spacing grid.h) and its vertices. Any candidate
/// with |y| > window raises window-overflow.
ScalarField solve_homogenized(const EffectiveModel& model, const SpaceFunction& u0, const SpaceGrid& grid,
                              const std::vector<double>& times,
                              double window = std::numeric_limits<double>::infinity());

}  // namespace frontlab
