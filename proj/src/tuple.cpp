// tuple.cpp

#include "ktuple/tuple.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "ktuple/error.hpp"
#include "ktuple/number_theory.hpp"

namespace ktuple {

Tuple::Tuple(std::vector<std::uint64_t> offsets) : offsets_(std::move(offsets)) {
    std::sort(offsets_.begin(), offsets_.end());
    if (std::adjacent_find(offsets_.begin(), offsets_.end()) != offsets_.end()) {
        throw DomainError("tuple offsets must be distinct");
    }
}

Tuple Tuple::parse(std::string_view text) {
    std::vector<std::uint64_t> values;
    auto trim = [](std::string_view s) {
        const auto first = s.find_first_not_of(" \t");
        if (first == std::string_view::npos) return std::string_view{};
        const auto last = s.find_last_not_of(" \t");
        return s.substr(first, last - first + 1);
    };
    if (trim(text).empty()) return Tuple{};
    std::size_t pos = 0;
    while (true) {
        const auto comma = text.find(',', pos);
        const auto field = trim(text.substr(pos, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - pos));
        std::uint64_t v = 0;
        const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || ec != std::errc{} || end != field.data() + field.size()) {
            throw DomainError("malformed tuple entry '" + std::string(field) +
                              "': expected a non-negative integer");
        }
        values.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return Tuple(std::move(values));
}

Tuple Tuple::shifted(std::uint64_t c) const {
    if (!empty() && max() > std::numeric_limits<std::uint64_t>::max() - c) {
        throw DomainError("tuple shift overflows 64 bits");
    }
    std::vector<std::uint64_t> out(offsets_);
    for (auto& v : out) v += c;
    return Tuple(std::move(out));
}

std::string Tuple::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(offsets_[i]);
    }
    return out;
}

std::vector<std::uint64_t> Tuple::differences() const {
    std::vector<std::uint64_t> out;
    out.reserve(size() * (size() > 0 ? size() - 1 : 0) / 2);
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) out.push_back(offsets_[j] - offsets_[i]);
    }
    return out;
}

std::vector<std::uint64_t> Tuple::discriminant_primes() const {
    auto diffs = differences();
    std::sort(diffs.begin(), diffs.end());
    diffs.erase(std::unique(diffs.begin(), diffs.end()), diffs.end());
    std::vector<std::uint64_t> primes;
    for (auto d : diffs) {
        auto f = prime_factors(d);
        primes.insert(primes.end(), f.begin(), f.end());
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

double Tuple::log_discriminant() const {
    double total = 0.0;
    for (auto d : differences()) total += std::log(static_cast<double>(d));
    return total;
}

std::size_t Tuple::residue_count(std::uint64_t m) const {
    if (m == 0) throw DomainError("residue_count: modulus must be positive");
    if (m <= 4096) {
        std::vector<bool> seen(m, false);
        std::size_t count = 0;
        for (auto h : offsets_) {
            auto r = h % m;
            if (!seen[r]) {
                seen[r] = true;
                ++count;
            }
        }
        return count;
    }
    std::vector<std::uint64_t> residues;
    residues.reserve(size());
    for (auto h : offsets_) residues.push_back(h % m);
    std::sort(residues.begin(), residues.end());
    return static_cast<std::size_t>(std::unique(residues.begin(), residues.end()) -
                                    residues.begin());
}

}  // namespace ktuple
