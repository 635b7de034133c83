#include "doseeffect/model_document.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include "doseeffect/error.hpp"

namespace doseeffect {
namespace {

constexpr int kDigits = 17;

class KeyValues {
 public:
  explicit KeyValues(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorCode::ParseError,
                    "model line " + std::to_string(line_no) + ": expected key=value");
      }
      auto key = line.substr(0, eq);
      if (!entries_.emplace(key, line.substr(eq + 1)).second) {
        throw Error(ErrorCode::ParseError,
                    "model line " + std::to_string(line_no) + ": duplicate key " + key);
      }
    }
  }

  const std::string& text(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
      throw Error(ErrorCode::ParseError, "model document lacks key " + key);
    }
    used_.emplace(key);
    return it->second;
  }

  double number(const std::string& key) const {
    double v = 0.0;
    if (!parse_number(text(key), v)) {
      throw Error(ErrorCode::ParseError, "model key " + key + " is not a finite number");
    }
    return v;
  }

  void require_all_used() const {
    for (const auto& [key, value] : entries_) {
      if (!used_.count(key)) {
        throw Error(ErrorCode::ParseError, "unknown model key " + key);
      }
    }
  }

 private:
  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
};

void put(std::ostream& out, const std::string& key, double value) {
  out << key << '=' << format_number(value, kDigits) << '\n';
}

}  // namespace

void write_model_document(const ModelDocument& doc, std::ostream& out) {
  validate(doc.model);
  out << "format=" << kModelFormat << '\n';
  const auto& mu = doc.model.mu_curve;
  put(out, "mu.m", mu.m);
  put(out, "mu.p", mu.p);
  put(out, "mu.l1", mu.l1);
  put(out, "mu.l2", mu.l2);

  if (const auto* l = std::get_if<LogisticParams>(&doc.model.sigma_curve)) {
    out << "sigma.family=" << to_string(SigmaFamily::logistic) << '\n';
    put(out, "sigma.m", l->m);
    put(out, "sigma.p", l->p);
    put(out, "sigma.l1", l->l1);
    put(out, "sigma.l2", l->l2);
  } else {
    const auto& g = std::get<GaussianTypeParams>(doc.model.sigma_curve);
    out << "sigma.family=" << to_string(SigmaFamily::gaussian_type) << '\n';
    put(out, "sigma.l", g.l);
    put(out, "sigma.m", g.m);
    put(out, "sigma.p", g.p);
    put(out, "sigma.q", g.q);
  }

  const auto& g = doc.model.gamma_curve;
  put(out, "gamma.l", g.l);
  put(out, "gamma.m", g.m);
  put(out, "gamma.p", g.p);
  put(out, "gamma.q", g.q);
  put(out, "d0_hat", doc.model.d0_hat);

  out << "empirical.count=" << doc.empirical.size() << '\n';
  for (std::size_t i = 0; i < doc.empirical.size(); ++i) {
    const std::string prefix = "empirical." + std::to_string(i) + '.';
    const auto& row = doc.empirical[i];
    put(out, prefix + "dose", row.dose);
    put(out, prefix + "mean", row.mean_hat);
    put(out, prefix + "sd", row.sd_hat);
    put(out, prefix + "skew", row.skew_hat);
    out << prefix << "n=" << row.n << '\n';
  }
}

ModelDocument read_model_document(std::istream& in) {
  const KeyValues kv(in);
  if (kv.text("format") != kModelFormat) {
    throw Error(ErrorCode::ParseError, "unsupported model format " + kv.text("format"));
  }

  ModelDocument doc;
  doc.model.mu_curve = {kv.number("mu.m"), kv.number("mu.p"), kv.number("mu.l1"),
                        kv.number("mu.l2")};
  const std::string& family = kv.text("sigma.family");
  if (family == to_string(SigmaFamily::logistic)) {
    doc.model.sigma_curve = LogisticParams{kv.number("sigma.m"), kv.number("sigma.p"),
                                           kv.number("sigma.l1"), kv.number("sigma.l2")};
  } else if (family == to_string(SigmaFamily::gaussian_type)) {
    doc.model.sigma_curve = GaussianTypeParams{kv.number("sigma.l"), kv.number("sigma.m"),
                                               kv.number("sigma.p"), kv.number("sigma.q")};
  } else {
    throw Error(ErrorCode::ParseError, "unknown sigma.family " + family);
  }
  doc.model.gamma_curve = {kv.number("gamma.l"), kv.number("gamma.m"), kv.number("gamma.p"),
                           kv.number("gamma.q")};
  doc.model.d0_hat = kv.number("d0_hat");

  const double count = kv.number("empirical.count");
  if (count < 0.0 || count != std::floor(count)) {
    throw Error(ErrorCode::ParseError, "empirical.count must be a count");
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i) {
    const std::string prefix = "empirical." + std::to_string(i) + '.';
    const double n = kv.number(prefix + "n");
    if (n < 0.0 || n != std::floor(n)) {
      throw Error(ErrorCode::ParseError, prefix + "n must be a count");
    }
    doc.empirical.push_back({kv.number(prefix + "dose"), kv.number(prefix + "mean"),
                             kv.number(prefix + "sd"), kv.number(prefix + "skew"),
                             static_cast<std::size_t>(n)});
  }
  kv.require_all_used();

  try {
    validate(doc.model);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid model: ") + e.what());
  }
  return doc;
}

}  // namespace doseeffect
