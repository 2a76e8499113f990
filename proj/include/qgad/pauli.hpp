#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgad/config.hpp"

namespace qgad {

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

char axis_char(Axis a);

/// Phase-free tensor product of single-qubit Paulis. Qubits absent from the
/// site list carry identity, so weight == number of stored sites.
class PauliString {
  public:
    using Site = std::pair<std::uint32_t, Axis>;

    PauliString() = default;  // identity

    static PauliString single(Axis axis, std::uint32_t qubit);
    /// Builds from (qubit, axis) pairs in any order; throws ValidationError on
    /// a repeated qubit index.
    static PauliString from_sites(std::vector<Site> sites);

    int weight() const { return static_cast<int>(sites_.size()); }
    bool is_identity() const { return sites_.empty(); }
    std::optional<Axis> axis_on(std::uint32_t qubit) const;
    const std::vector<Site>& sites() const { return sites_; }
    std::uint32_t min_qubit() const;  // requires weight >= 1
    std::uint32_t max_qubit() const;  // requires weight >= 1

    /// Sites with qubit index satisfying pred.
    template <class Pred>
    PauliString filter(Pred pred) const {
        std::vector<Site> kept;
        for (const auto& s : sites_)
            if (pred(s.first)) kept.push_back(s);
        PauliString out;
        out.sites_ = std::move(kept);
        return out;
    }

    bool operator==(const PauliString&) const = default;
    /// Canonical order: lexicographic over (qubit index, axis code X<Y<Z);
    /// identity sorts first.
    std::strong_ordering operator<=>(const PauliString& other) const;

    std::string to_string() const;  // e.g. "X0 Z3"; "" for identity

  private:
    std::vector<Site> sites_;  // sorted by qubit, unique
};

/// Fourth root of unity i^k.
class Phase {
  public:
    constexpr Phase() = default;
    static constexpr Phase one() { return Phase{0}; }
    static constexpr Phase i() { return Phase{1}; }
    static constexpr Phase minus_one() { return Phase{2}; }
    static constexpr Phase minus_i() { return Phase{3}; }

    constexpr Phase operator*(Phase rhs) const { return Phase{(exponent_ + rhs.exponent_) % 4}; }
    std::complex<double> value() const;
    constexpr int exponent() const { return exponent_; }
    bool operator==(const Phase&) const = default;

  private:
    constexpr explicit Phase(int e) : exponent_(e) {}
    int exponent_ = 0;  // i^exponent_
};

struct PhasedProduct {
    Phase phase;
    PauliString string;
};

/// Operator product a*b with the phase tracked exactly.
PhasedProduct multiply(const PauliString& a, const PauliString& b);

bool commute(const PauliString& a, const PauliString& b);

/// True iff on every qubit the single-qubit factors commute (equal axis or
/// at least one identity).
bool qubitwise_commute(const PauliString& a, const PauliString& b);

/// Relabels qubits through an injective map defined on the whole support.
PauliString embed(const PauliString& term, const std::map<std::uint32_t, std::uint32_t>& mapping);

struct PauliTerm {
    double coefficient;
    PauliString string;
    bool operator==(const PauliTerm&) const = default;
};

/// Real-weighted sum of Pauli strings over a declared register width.
/// Normalized on construction: canonical term order, equal strings merged,
/// coefficients within Tolerances::coefficient_merge of zero dropped.
class PauliSum {
  public:
    PauliSum() = default;

    static PauliSum zero(std::uint32_t n_qubits);
    static PauliSum from_terms(std::vector<PauliTerm> terms,
                               std::optional<std::uint32_t> n_qubits = std::nullopt);

    const std::vector<PauliTerm>& terms() const { return terms_; }
    std::uint32_t n_qubits() const { return n_qubits_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    int max_weight() const;  // 0 for an empty sum
    double coefficient_of(const PauliString& s) const;

    PauliSum& operator+=(const PauliSum& rhs);
    PauliSum& operator+=(const PauliTerm& t);
    PauliSum& operator*=(double c);
    friend PauliSum operator+(PauliSum lhs, const PauliSum& rhs) { return lhs += rhs; }
    friend PauliSum operator*(double c, PauliSum s) { return s *= c; }

    /// Relabels every term; new width must cover the mapped support.
    PauliSum embedded(const std::map<std::uint32_t, std::uint32_t>& mapping,
                      std::uint32_t new_width) const;

    bool operator==(const PauliSum&) const = default;

  private:
    void normalize();
    std::vector<PauliTerm> terms_;
    std::uint32_t n_qubits_ = 0;
};

/// Text format:
///   optional first line  `qubits: <N>`
///   one term per line    `<coeff> [<AXIS><index> ...]`, identity as `<coeff> []`
///   `#` starts a comment, blank lines ignored.
PauliSum parse_pauli_sum(std::istream& in);
PauliSum parse_pauli_sum(const std::string& text);

/// Canonical text form; parse(format(s)) == s exactly.
std::string format_pauli_sum(const PauliSum& sum);

}  // namespace qgad
