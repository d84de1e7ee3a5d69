#pragma once

#include <cstdint>

#include "bguard/hankel.hpp"
#include "bguard/recover_exact.hpp"
#include "bguard/types.hpp"

namespace bguard {

struct AttackRecord {
    Trajectory w;      // attacked length-L trajectory
    IndexSet support;  // entry indices in {1..qL}, or channel indices in {1..q}
    AttackKind kind = AttackKind::entry;
    double magnitude = 0.0;
    std::uint64_t seed = 0;
    int k = 0;  // declared budget; |support| <= k
};

/// Corrupt a uniformly-drawn size-k entry support with perturbations of
/// absolute value in [magnitude/2, magnitude] and random sign.
AttackRecord entry_attack_random(const Trajectory& w_bar, int k, double magnitude,
                                 std::uint64_t seed);

/// Corrupt all L samples of k uniformly-drawn channels.
AttackRecord channel_attack_random(const Trajectory& w_bar, int k, double magnitude,
                                   std::uint64_t seed);

/// Stealth construction exploiting a failing Condition 1: picks the corrupted
/// entries inside a minimum critical row set and perturbs along the nullspace
/// gap, so the first consistent subset the brute-force scan meets yields a
/// wrong trajectory. Throws InfeasibleAttack when Condition 1 actually holds.
AttackRecord adversarial_entry_attack(const HankelMatrix& H, const Trajectory& w_bar, int k);

/// Channel analogue via the minimum (q,L)-critical set (Condition 2).
AttackRecord adversarial_channel_attack(const HankelMatrix& H, const Trajectory& w_bar, int k);

}  // namespace bguard
