#include "conesmooth/profile.hpp"

namespace conesmooth {

ProfilePair make_closed_form_profile(RadialFunction rho, RadialFunction phi, double domain_min,
                                     double domain_max) {
    ProfilePair p;
    p.rho = std::move(rho);
    p.phi = std::move(phi);
    p.domain_min = domain_min;
    p.domain_max = domain_max;
    p.variant = ProfileVariant::custom;
    return p;
}

std::string to_string(ProfileVariant v) {
    switch (v) {
    case ProfileVariant::custom: return "custom";
    case ProfileVariant::standard: return "standard";
    case ProfileVariant::doubled_inner_slope: return "doubled_inner_slope";
    }
    return "custom";
}

ProfileVariant profile_variant_from_string(const std::string& s) {
    if (s == "standard") return ProfileVariant::standard;
    if (s == "doubled_inner_slope") return ProfileVariant::doubled_inner_slope;
    if (s == "custom") return ProfileVariant::custom;
    throw std::invalid_argument("unknown profile variant '" + s + "'");
}

} // namespace conesmooth
