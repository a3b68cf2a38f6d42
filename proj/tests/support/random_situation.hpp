#pragma once

#include <cstdint>

#include "mdf/game.hpp"
#include "mdf/situation.hpp"

namespace mdf::testing {

struct RandomCase {
  std::uint64_t seed = 0;
  int attempts = 0;  // rejection-sampling rounds used
  MdfSituation situation;
  MdfGame game;
};

/// A valid situation with SC and NDH, built from single-segment linear curves
///   b(q) = b0 - kb q,  t_i(q) = t0 - kt q,  p_i(q) = p0 - kp q
/// on [0, +inf). The draw keeps every f(q) q non-decreasing on [0, Q] and the
/// no-farmer objective strictly concave (kb * sum 1/(kp - kt) < 0.9), so each
/// coalition has a unique maximiser. Transport intercepts are drawn so that the
/// with-farmer orders leave part of the harvest unsold. bbar is drawn in
/// (0, sc_bound] and lands exactly on the bound for one seed in eight. `n` = 0 draws n from 1..4.
RandomCase random_case(std::uint64_t seed, int n = 0, const GameOptions& opts = {});

}  // namespace mdf::testing
