// tuple.hpp
// A set H = {h_1 < ... < h_k} of distinct non-negative offsets.

#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ktuple {

class Tuple {
public:
    Tuple() = default;

    /// Sorts the offsets; throws DomainError on duplicates.
    explicit Tuple(std::vector<std::uint64_t> offsets);
    Tuple(std::initializer_list<std::uint64_t> offsets)
        : Tuple(std::vector<std::uint64_t>(offsets)) {}

    /// Parses "0,2,6" (whitespace around entries tolerated). Empty input gives
    /// the empty tuple. Throws DomainError on malformed entries or duplicates.
    static Tuple parse(std::string_view text);

    std::size_t size() const noexcept { return offsets_.size(); }
    bool empty() const noexcept { return offsets_.empty(); }
    std::span<const std::uint64_t> offsets() const noexcept { return offsets_; }
    std::uint64_t operator[](std::size_t i) const { return offsets_[i]; }

    std::uint64_t min() const { return offsets_.front(); }
    std::uint64_t max() const { return offsets_.back(); }
    std::uint64_t span() const { return empty() ? 0 : max() - min(); }

    /// H + c. Throws DomainError if an offset would overflow.
    Tuple shifted(std::uint64_t c) const;

    /// Canonical comma-separated form.
    std::string to_string() const;

    /// h_j - h_i for all i < j.
    std::vector<std::uint64_t> differences() const;

    /// Distinct primes dividing D_H = prod_{i<j}(h_j - h_i). D_H itself is
    /// never formed.
    std::vector<std::uint64_t> discriminant_primes() const;

    /// log|D_H| as a sum of logs (0 for k < 2).
    double log_discriminant() const;

    /// nu_H(m): number of distinct residues of the offsets modulo m (m >= 1).
    std::size_t residue_count(std::uint64_t m) const;

    friend auto operator<=>(const Tuple&, const Tuple&) = default;

private:
    std::vector<std::uint64_t> offsets_;
};

}  // namespace ktuple
