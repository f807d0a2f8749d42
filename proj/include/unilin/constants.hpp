#pragma once

#include "unilin/exact.hpp"

namespace unilin {

// Named constants. Most are only known to exist; the values below are
// configuration defaults, every report echoes the resolved profile.
struct ConstantsProfile {
  long A = 4;
  long D = 4;
  long F = 4;
  Q E = 10;
  Q E1 = 10;
  Q EG = 10;
  long kappa = 1;             // containment margin of the expanding maps
  Q C1 = 1;                   // Brownawell constant
  long k_brownawell = 2;
  long kappa_greenberg = 1;   // Greenberg exponent kappa
  Q C2_inheritance = 1;
  Q kappa_prime = Q(1, 16);   // nilpotent-subalgebra threshold
  Q rho = Q(1, 16);
  Q aQ = 20;                  // rational stand-in for the expansion base
  Q eps_max = Q(1, 2);        // cap keeping epsilon profiles inside (0,1)
  Q minkowski_A = 4;          // interpolation constant for flag completion
  Q catalog_margin = 4;       // pruning margin for catalog BFS
};

}  // namespace unilin
