#include "pham/poly_json.hpp"

#include "pham/errors.hpp"

namespace pham {

SparsePoly poly_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("vars").get<std::size_t>();
    SparsePoly p(n);
    for (const auto& term : j.at("terms")) {
      const auto exps = term.at("exp").get<Monomial>();
      const double re = term.at("re").get<double>();
      const double im = term.contains("im") ? term.at("im").get<double>() : 0.0;
      p.add_term(exps, Complex(re, im));
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed polynomial literal: ") + e.what());
  }
}

nlohmann::json poly_to_json(const SparsePoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [exps, c] : p.terms())
    terms.push_back({{"exp", exps}, {"re", c.real()}, {"im", c.imag()}});
  return {{"vars", p.n_vars()}, {"terms", std::move(terms)}};
}

}  // namespace pham
