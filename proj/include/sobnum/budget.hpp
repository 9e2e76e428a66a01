#pragma once

#include <cstddef>
#include <cstdint>

namespace sobnum {

// Resource limits shared by the counting and tail engines. Budgets guard
// against workloads that would silently run forever or exhaust memory;
// they never change computed values, only whether a computation is refused.
struct Budget {
    // Inner steps (loop iterations of the counting recursions, points
    // enumerated, levels summed) before BudgetExceeded is thrown.
    std::uint64_t max_steps = 2'000'000'000ULL;
    // Entries a materialized level/multiplicity array may hold.
    std::size_t max_level_entries = 1ULL << 25;
};

}  // namespace sobnum
