#pragma once

// Weight profile selection and trust score composition.
//
// Four predefined profiles cover the common availability patterns; any other
// subset falls back to proportional redistribution of the full profile.
// The predefined rows take precedence deliberately (the no-network S1 weight
// is .35, not the .375 redistribution would yield).

#include <string>

#include "signals.hpp"

namespace locgate {

struct WeightProfile {
    std::array<double, kSignalCount> weights{};  // zero where absent
    uint8_t mask = 0;
    std::string name;

    double weight(SignalId id) const { return weights[static_cast<int>(id)]; }
    // Present weights must sum to 1 within 1e-9, each in [0, 1].
    void validate() const;
};

WeightProfile make_profile(std::string name, uint8_t mask,
                           const std::array<double, kSignalCount>& weights);

// The deployment profile table; defaults carry the standard weights and may
// be overridden from configuration.
struct ProfileTable {
    WeightProfile all_five;
    WeightProfile no_network;  // S1-S4
    WeightProfile no_fixes;    // S1-S3, S5
    WeightProfile v1;          // S1-S3

    static ProfileTable defaults();
    void validate() const;
};

// Exact-match lookup of the predefined profiles, proportional fallback for
// every other non-empty subset.
WeightProfile select_profile(uint8_t available_mask, const ProfileTable& table);

// w'_i = w_i / sum of base weights over `subset_mask`; subset must be
// non-empty and within the base profile's signals.
WeightProfile redistribute_proportional(const WeightProfile& base, uint8_t subset_mask);

struct TrustScore {
    double value = 0.0;
    SignalVector contributing;
    WeightProfile profile;
};

// Weighted sum over the present signals; the profile's signal set must equal
// the vector's present set.
TrustScore compose(const SignalVector& signals, const WeightProfile& profile);

}  // namespace locgate
