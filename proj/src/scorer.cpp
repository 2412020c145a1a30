#include "scorer.hpp"

#include <algorithm>
#include <cmath>

namespace locgate {

void WeightProfile::validate() const {
    if (mask == 0) throw_validation("weight profile has no signals");
    double sum = 0.0;
    for (int i = 0; i < kSignalCount; ++i) {
        const auto id = static_cast<SignalId>(i);
        const double w = weights[i];
        if (mask & signal_bit(id)) {
            if (!(w >= 0.0) || !(w <= 1.0))
                throw_validation("weight out of [0,1] for " + std::string(signal_name(id)));
            sum += w;
        } else if (w != 0.0) {
            throw_validation("absent signal carries nonzero weight: " +
                             std::string(signal_name(id)));
        }
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw_validation("profile '" + name + "' weights sum to " + std::to_string(sum));
}

WeightProfile make_profile(std::string name, uint8_t mask,
                           const std::array<double, kSignalCount>& weights) {
    WeightProfile p;
    p.name = std::move(name);
    p.mask = mask;
    p.weights = weights;
    p.validate();
    return p;
}

ProfileTable ProfileTable::defaults() {
    ProfileTable t;
    t.all_five = make_profile("all_five", 0b11111, {0.30, 0.10, 0.15, 0.25, 0.20});
    t.no_network = make_profile("no_network", 0b01111, {0.35, 0.15, 0.20, 0.30, 0.0});
    t.no_fixes = make_profile("no_fixes", 0b10111, {0.40, 0.15, 0.20, 0.0, 0.25});
    t.v1 = make_profile("v1", 0b00111, {0.50, 0.20, 0.30, 0.0, 0.0});
    return t;
}

void ProfileTable::validate() const {
    all_five.validate();
    no_network.validate();
    no_fixes.validate();
    v1.validate();
    if (all_five.mask != 0b11111 || no_network.mask != 0b01111 || no_fixes.mask != 0b10111 ||
        v1.mask != 0b00111)
        throw_validation("profile table masks are fixed by the availability patterns");
}

WeightProfile select_profile(uint8_t available_mask, const ProfileTable& table) {
    available_mask &= kAllSignalsMask;
    if (available_mask == 0) throw_argument("cannot select a profile for an empty signal set");
    if (available_mask == table.all_five.mask) return table.all_five;
    if (available_mask == table.no_network.mask) return table.no_network;
    if (available_mask == table.no_fixes.mask) return table.no_fixes;
    if (available_mask == table.v1.mask) return table.v1;
    return redistribute_proportional(table.all_five, available_mask);
}

WeightProfile redistribute_proportional(const WeightProfile& base, uint8_t subset_mask) {
    subset_mask &= kAllSignalsMask;
    if (subset_mask == 0) throw_argument("cannot redistribute onto an empty subset");
    if ((subset_mask & base.mask) != subset_mask)
        throw_argument("subset is not contained in the base profile");
    double sum = 0.0;
    for (int i = 0; i < kSignalCount; ++i)
        if (subset_mask & (1u << i)) sum += base.weights[i];
    if (!(sum > 0.0)) throw_argument("subset carries zero total base weight");
    WeightProfile out;
    out.name = "proportional";
    out.mask = subset_mask;
    for (int i = 0; i < kSignalCount; ++i)
        if (subset_mask & (1u << i)) out.weights[i] = base.weights[i] / sum;
    return out;
}

TrustScore compose(const SignalVector& signals, const WeightProfile& profile) {
    if (signals.mask() != profile.mask)
        throw_argument("profile signal set does not match the present signals");
    double t = 0.0;
    for (int i = 0; i < kSignalCount; ++i) {
        const auto id = static_cast<SignalId>(i);
        if (signals.present(id)) t += profile.weight(id) * signals.get(id);
    }
    TrustScore out;
    out.value = std::clamp(t, 0.0, 1.0);
    out.contributing = signals;
    out.profile = profile;
    return out;
}

}  // namespace locgate
