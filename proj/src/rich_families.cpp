#include "sepdet/rich_families.hpp"

#include "sepdet/error.hpp"

namespace sepdet {

FamilyHandle make_family(std::shared_ptr<const MetricSpace> space, std::vector<WitnessProblem> operators,
                         ClosureConfig config) {
    for (const auto& op : operators)
        if (op.space != space) throw Error(ErrorKind::SpaceMismatch, op.name + " lives over a different space");
    return FamilyHandle{std::move(space), std::move(operators), config};
}

bool is_member(const FamilyHandle& family, const PointSet& members) {
    if (members.empty()) return false;
    ClosureConfig one_round = family.config;
    one_round.max_depth = 1;
    return closure_iterate(family.operators, members, one_round).fixed_point;
}

PointSet cofinal_extend(const FamilyHandle& family, const PointSet& start) {
    if (start.empty()) throw Error(ErrorKind::BadDescriptor, "cannot extend an empty set");
    auto generated = closure_iterate(family.operators, start, family.config);
    if (!generated.fixed_point)
        throw Error(ErrorKind::DepthExceeded,
                    "no fixed point within " + std::to_string(family.config.max_depth) + " rounds");
    return generated.result();
}

SigmaUnion sigma_union(const FamilyHandle& family, std::span<const PointSet> chain) {
    if (chain.empty()) throw Error(ErrorKind::NotAChain, "empty chain");
    for (std::size_t i = 1; i < chain.size(); ++i)
        if (!chain[i].includes(chain[i - 1]))
            throw Error(ErrorKind::NotAChain, "element " + std::to_string(i) + " does not contain its predecessor");
    SigmaUnion out{chain.front(), false};
    for (const auto& link : chain.subspan(1)) out.members = out.members.united(link);
    out.is_member = is_member(family, out.members);
    return out;
}

FamilyHandle intersect(std::span<const FamilyHandle> families) {
    if (families.empty()) throw Error(ErrorKind::BadDescriptor, "nothing to intersect");
    FamilyHandle out{families.front().space, {}, families.front().config};
    for (const auto& family : families) {
        if (family.space != out.space) throw Error(ErrorKind::SpaceMismatch, "families over different spaces");
        out.operators.insert(out.operators.end(), family.operators.begin(), family.operators.end());
        out.config.max_depth = std::max(out.config.max_depth, family.config.max_depth);
    }
    return out;
}

}  // namespace sepdet
