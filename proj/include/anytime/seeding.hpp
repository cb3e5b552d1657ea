#pragma once

#include <cstdint>
#include <string_view>

namespace anytime {

/// Used whenever no seed is given, so bare runs reproduce.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a over the label bytes.
std::uint64_t stream_hash(std::string_view label);

/// Stateless per-replication seed. For fixed (master, stream) the map
/// replication -> seed is injective, and likewise for fixed (master,
/// replication) across streams with distinct hashes.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replication, std::string_view stream);

}  // namespace anytime
