#include <json.hpp>

#include "expi/recognizer.hpp"

namespace expi {

namespace {

using Json = nlohmann::ordered_json;

std::string rational_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw Error(ErrorKind::ParseError, "bad rational: " + text);
  r.canonicalize();
  return r;
}

std::optional<ErrorKind> parse_kind(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(ErrorKind::IoError); ++i) {
    auto kind = static_cast<ErrorKind>(i);
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

// Rebuild the closed form from a relation against named basis entries.
ClosedForm form_from_relation(const std::vector<BigInt>& rel, const std::vector<std::string>& basis) {
  ClosedForm form;
  for (std::size_t j = 1; j < rel.size() && j < basis.size(); ++j) {
    if (rel[j] == 0) continue;
    Rational e(-rel[j], rel[0]);
    e.canonicalize();
    const std::string& name = basis[j];
    if (name == "pi") {
      form.exp_pi += e;
    } else if (name == "log_pi") {
      form.pi_exp += e;
    } else if (name == "log_2") {
      form.two_exp += e;
    } else if (name == "log_3") {
      form.three_exp += e;
    } else if (name == "log_5") {
      form.five_exp += e;
    } else if (name.rfind("log_gamma_", 0) == 0) {
      std::string rest = name.substr(10);
      auto cut = rest.find('_');
      if (cut == std::string::npos) throw Error(ErrorKind::ParseError, "bad basis name: " + name);
      form.gamma.push_back({parse_rational(rest.substr(0, cut) + "/" + rest.substr(cut + 1)), e});
    } else {
      throw Error(ErrorKind::ParseError, "unknown basis name: " + name);
    }
  }
  form.normalize();
  return form;
}

}  // namespace

std::string to_json_line(const RecognitionReport& r) {
  Json j;
  j["id"] = r.id;
  j["k"] = rational_string(r.k);
  j["s"] = rational_string(r.s);
  j["digits"] = r.digits;
  j["value"] = r.value.empty() ? Json(nullptr) : Json(r.value);
  j["outcome"] = std::string(to_string(r.outcome));
  const bool ok = r.outcome == Outcome::Recognized;
  j["formula"] = ok ? Json(r.formula) : Json(nullptr);
  if (ok) {
    Json rel = Json::array();
    for (const auto& c : r.relation) rel.push_back(c.get_str());
    j["relation"] = rel;
    j["residual_log10"] = r.residual_log10;
    j["confidence"] = r.low_confidence ? "low" : "high";
  } else {
    j["relation"] = nullptr;
    j["residual_log10"] = nullptr;
    j["confidence"] = nullptr;
  }
  j["basis"] = r.basis;
  j["exclusion_log10"] = r.exclusion_log10;
  if (r.error) {
    j["error"] = Json{{"kind", std::string(to_string(*r.error))}, {"message", r.error_message}};
  } else {
    j["error"] = nullptr;
  }
  return j.dump();
}

RecognitionReport parse_json_line(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("report is not JSON: ") + e.what());
  }
  try {
    RecognitionReport r;
    r.id = j.at("id").get<std::string>();
    r.k = parse_rational(j.at("k").get<std::string>());
    r.s = parse_rational(j.at("s").get<std::string>());
    r.digits = j.at("digits").get<long>();
    if (!j.at("value").is_null()) r.value = j["value"].get<std::string>();
    const std::string outcome = j.at("outcome").get<std::string>();
    if (outcome == "recognized") {
      r.outcome = Outcome::Recognized;
    } else if (outcome == "none") {
      r.outcome = Outcome::None;
    } else if (outcome == "error") {
      r.outcome = Outcome::Error;
    } else {
      throw Error(ErrorKind::ParseError, "unknown outcome: " + outcome);
    }
    r.basis = j.at("basis").get<std::vector<std::string>>();
    r.exclusion_log10 = j.at("exclusion_log10").get<double>();
    if (r.outcome == Outcome::Recognized) {
      r.formula = j.at("formula").get<std::string>();
      for (const auto& c : j.at("relation")) r.relation.emplace_back(c.get<std::string>());
      r.residual_log10 = j.at("residual_log10").get<double>();
      r.confirm_residual_log10 = r.residual_log10;
      r.low_confidence = j.at("confidence").get<std::string>() == "low";
      r.form = form_from_relation(r.relation, r.basis);
    }
    if (!j.at("error").is_null()) {
      r.error = parse_kind(j["error"].at("kind").get<std::string>());
      r.error_message = j["error"].at("message").get<std::string>();
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed report: ") + e.what());
  }
}

}  // namespace expi
