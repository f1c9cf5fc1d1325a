#include "conesmooth/obstruction_checks.hpp"

#include <boost/multiprecision/number.hpp>

namespace conesmooth {

SpaceFormId parse_space_form(const std::string& name) {
    if (name == "Q8") return SpaceFormId::Q8;
    if (name == "BinaryIcosahedral" || name == "I*") return SpaceFormId::BinaryIcosahedral;
    throw UnknownGroupError("unknown space form group '" + name + "'");
}

std::string to_string(SpaceFormId id) {
    switch (id) {
    case SpaceFormId::Q8: return "Q8";
    case SpaceFormId::BinaryIcosahedral: return "BinaryIcosahedral";
    }
    throw UnknownGroupError("unknown space form id " + std::to_string(static_cast<int>(id)));
}

SpaceFormGroup space_form_group(SpaceFormId id) {
    switch (id) {
    case SpaceFormId::Q8: return {id, 8, Rational(3, 4)};
    case SpaceFormId::BinaryIcosahedral: return {id, 120, Rational(361, 180)};
    }
    throw UnknownGroupError("unknown space form id " + std::to_string(static_cast<int>(id)));
}

EtaInvariant eta_invariant(SpaceFormId id) { return EtaInvariant{space_form_group(id).eta, true}; }

bool TopologicalData::consistent() const {
    if (!betti) return true;
    const auto& b = *betti;
    if (b.size() != 5) return false;
    return chi == Rational(b[0] - b[1] + b[2] - b[3] + b[4]);
}

TopologicalData betti_constraints(const std::vector<long long>& b) {
    if (b.size() != 5) throw ContractError("expected five Betti numbers b0..b4");
    if (b[0] != 1) throw ContractError("b0 must be 1 (connected)");
    if (b[1] != 0) throw ContractError("b1 must vanish (finite fundamental group)");
    if (b[2] != 0) throw ContractError("b2 must vanish (rational H2 of the cover is zero)");
    if (b[4] != 0) throw ContractError("b4 must vanish (open manifold)");
    if (b[3] < 0) throw ContractError("b3 must be nonnegative");
    return TopologicalData{Rational(1 - b[3]), Rational(0), b};
}

HitchinVerdict hitchin_check(const TopologicalData& data, SpaceFormId group, Orientation orientation) {
    const SpaceFormGroup g = space_form_group(group);
    HitchinVerdict v;
    v.lhs = 2 * (data.chi - Rational(1, g.order));
    v.rhs = 3 * abs(data.tau + eta_invariant(group).signed_value(orientation));
    v.consistent = v.lhs >= v.rhs;
    return v;
}

std::string to_string(const Rational& q) {
    const auto num = boost::multiprecision::numerator(q);
    const auto den = boost::multiprecision::denominator(q);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& text) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return Rational(boost::multiprecision::cpp_int(text));
        const boost::multiprecision::cpp_int num(text.substr(0, slash));
        const boost::multiprecision::cpp_int den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational number: '" + text + "'");
    }
}

} // namespace conesmooth
