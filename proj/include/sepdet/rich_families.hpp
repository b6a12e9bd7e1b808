#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "sepdet/scheme.hpp"

namespace sepdet {

/**
 * A rich family represented by its closure operators: a subset is a member
 * exactly when it is a fixed point of every operator in the list.
 */
struct FamilyHandle {
    std::shared_ptr<const MetricSpace> space;
    std::vector<WitnessProblem> operators;
    ClosureConfig config;
};

/// Builds a handle; SpaceMismatch if an operator lives elsewhere.
FamilyHandle make_family(std::shared_ptr<const MetricSpace> space, std::vector<WitnessProblem> operators,
                         ClosureConfig config = {});

/// One closure round over `members` adds nothing, for every operator.
bool is_member(const FamilyHandle& family, const PointSet& members);

/// The least member containing `start`; DepthExceeded when the depth budget runs out first.
PointSet cofinal_extend(const FamilyHandle& family, const PointSet& start);

struct SigmaUnion {
    PointSet members;
    bool is_member = false;
};

/// Union of an increasing chain of members; NotAChain if inclusion fails.
SigmaUnion sigma_union(const FamilyHandle& family, std::span<const PointSet> chain);

/// Concatenated operator lists; SpaceMismatch across spaces.
FamilyHandle intersect(std::span<const FamilyHandle> families);

}  // namespace sepdet
