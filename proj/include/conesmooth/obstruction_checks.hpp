#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace conesmooth {

using Rational = boost::multiprecision::cpp_rational;

/// Finite subgroups of SU(2) whose space forms enter the obstruction.
enum class SpaceFormId { Q8, BinaryIcosahedral };

class UnknownGroupError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// "Q8", "BinaryIcosahedral" (alias "I*"); anything else throws UnknownGroupError.
SpaceFormId parse_space_form(const std::string& name);
std::string to_string(SpaceFormId id);

struct SpaceFormGroup {
    SpaceFormId id;
    int order;
    Rational eta; // magnitude of the signature-operator eta invariant
};

/// Table entry for id. Throws UnknownGroupError for ids outside the table.
SpaceFormGroup space_form_group(SpaceFormId id);

enum class Orientation { positive, negative };

/// The eta invariant is only defined up to orientation: the magnitude is
/// tabulated and the sign is the caller's choice.
struct EtaInvariant {
    Rational magnitude;
    bool orientation_dependent = true;

    Rational signed_value(Orientation o) const { return o == Orientation::positive ? magnitude : Rational(-magnitude); }
};

EtaInvariant eta_invariant(SpaceFormId id);

struct TopologicalData {
    Rational chi;
    Rational tau;
    std::optional<std::vector<long long>> betti; // b0..b4 when known

    /// chi == b0 - b1 + b2 - b3 + b4 whenever betti is present.
    bool consistent() const;
};

class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Enforces b0 = 1, b1 = b2 = b4 = 0, b3 >= 0 and returns chi = 1 - b3,
/// tau = 0. Throws ContractError otherwise.
TopologicalData betti_constraints(const std::vector<long long>& b);

struct HitchinVerdict {
    Rational lhs; // 2 (chi - 1/|Gamma|)
    Rational rhs; // 3 |tau + eta|
    bool consistent = false; // lhs >= rhs
};

/// Evaluates 2(chi - 1/|Gamma|) >= 3 |tau + eta| exactly.
HitchinVerdict hitchin_check(const TopologicalData& data, SpaceFormId group,
                             Orientation orientation = Orientation::positive);

std::string to_string(const Rational& q);

/// Parses "a", "-a" or "a/b".
Rational parse_rational(const std::string& text);

} // namespace conesmooth
