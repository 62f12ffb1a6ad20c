#include "gadmm/robust_protection.hpp"

#include "gadmm/errors.hpp"
#include "gadmm/losses.hpp"

namespace gadmm {

double protection_value(const ProtectionSpec& spec, std::size_t n, std::span<const Vector> all_weights) {
    const auto* l2 = std::get_if<L2Protection>(&spec);
    if (l2 == nullptr) return 0.0;
    if (n >= l2->varsigma.size() || n >= l2->delta.size()) throw InvalidArgument("user index out of range");
    double others = 0.0;
    for (std::size_t m = 0; m < all_weights.size(); ++m)
        if (m != n) others += all_weights[m].squaredNorm();
    return l2->varsigma[n] * others + l2->delta[n];
}

double robust_objective(LossKind loss, const ProtectionSpec& spec, std::size_t n, const Vector& w_n,
                        const UserDataset& data, std::span<const Vector> all_weights) {
    return loss_value(loss, w_n, data) + protection_value(spec, n, all_weights);
}

double protection_cross_coupling(const ProtectionSpec& spec, std::size_t n) {
    const auto* l2 = std::get_if<L2Protection>(&spec);
    if (l2 == nullptr) return 0.0;
    if (n >= l2->varsigma.size()) throw InvalidArgument("user index out of range");
    return 2.0 * l2->varsigma[n];
}

}  // namespace gadmm
