#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "doseeffect/dose_effect.hpp"
#include "doseeffect/trial_io.hpp"

namespace doseeffect {

/// A fitted model plus the per-dose summaries it was fitted to.
///
/// Serialized as flat UTF-8 `key=value` lines at 17 significant digits, so
/// a write/read cycle reproduces every coefficient bit for bit:
///
///     format=doseeffect-model/1
///     mu.m=-0.82777294836190283
///     sigma.family=gaussian_type
///     sigma.m=0.15018371920716563
///     ...
///     empirical.count=4
///     empirical.0.dose=0
struct ModelDocument {
  DoseEffectModel model;
  std::vector<SummaryRow> empirical;
};

inline constexpr const char* kModelFormat = "doseeffect-model/1";

void write_model_document(const ModelDocument& doc, std::ostream& out);

/// Throws Error(ParseError) for malformed lines, unknown or missing keys.
ModelDocument read_model_document(std::istream& in);

}  // namespace doseeffect
