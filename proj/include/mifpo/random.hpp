#pragma once

#include "mifpo/common.hpp"
#include "mifpo/core.hpp"
#include "mifpo/reprlab.hpp"

namespace mifpo {

// Random valid instance: alpha0 ~ U(0.1, 0.9), posteriors uniform on [0,1],
// weights from the flat simplex.
MifpoInstance random_instance(Rng& rng, std::size_t l0, std::size_t l1, int k,
                              ObjectiveKind objective);

// Random sizes small enough for exhaustive vertex enumeration under the
// default oracle budget (l0, l1 <= 2, k <= 2, l0*l1*k <= 5).
MifpoInstance random_oracle_instance(Rng& rng);

// Row-stochastic representation variables drawn row-wise from the flat
// simplex; no witness blocks.
RepresentationVars random_feasible_vars(const MifpoInstance& inst, Rng& rng);

// Random representation with the given side/atom counts.
FiniteRepresentation random_representation(Rng& rng, std::size_t s0, std::size_t s1,
                                           std::size_t atoms);

// As above, but with duplicated posteriors on each side so merging has
// something to do.
FiniteRepresentation random_representation_with_collisions(Rng& rng, std::size_t s0,
                                                           std::size_t s1, std::size_t atoms);

TwoPointRep random_two_point(Rng& rng, std::size_t atoms);

}  // namespace mifpo
