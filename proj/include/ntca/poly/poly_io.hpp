// JSON form of PolynomialSpec.

#pragma once

#include "ntca/core/json_io.hpp"
#include "ntca/poly/polynomial.hpp"

namespace ntca {

inline json poly_to_json(const PolynomialSpec& p) {
    json j;
    j["label"] = p.label;
    j["degree"] = p.degree;
    j["parity"] = parity_name(p.parity);
    j["gamma"] = p.gamma;
    j["certified_error"] = p.certified_error;
    j["chebyshev"] = cvector_to_json(p.chebyshev);
    if (p.monomial_valid) j["monomial"] = cvector_to_json(p.monomial);
    return j;
}

inline PolynomialSpec poly_from_json(const json& j) {
    PolynomialSpec p = poly_from_chebyshev(cvector_from_json(j.at("chebyshev")),
                                           j.value("label", std::string{}));
    if (j.contains("monomial") && !p.monomial_valid) {
        p.monomial = cvector_from_json(j["monomial"]);
        p.monomial_valid = true;
    }
    if (j.contains("gamma")) p.gamma = std::max(p.gamma, j["gamma"].get<double>());
    if (j.contains("certified_error")) p.certified_error = j["certified_error"].get<double>();
    const std::string par = j.value("parity", parity_name(p.parity));
    require(par == parity_name(p.parity) || p.is_zero(),
            "stored parity disagrees with coefficient sparsity");
    return p;
}

} // namespace ntca
