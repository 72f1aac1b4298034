#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "apw/config.hpp"

namespace apw {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

void write_text(const std::filesystem::path& path, const std::string& text);
/// Pretty-printed JSON with a trailing newline; non-finite numbers become null.
std::string dump(const json& j);

/// "index,value" rows at 17 significant digits.
std::string spectrum_csv(const RVec& values);
/// "vector,index,re,im" rows.
std::string vectors_csv(const CMat& vectors);

json to_json(const Interval& i);
json to_json(const VerificationReport& r);
json to_json(const ChernResult& r);
json to_json(const GappedPathReport& r);
json to_json(const ResolventSweep& s);
json to_json(const DichotomyRow& r);

/// Run manifest: config hash (FNV-1a of the canonical TOML), seed, versions,
/// wall time.
json manifest(const ExperimentConfig& cfg, const std::string& subcommand, double wall_seconds,
              const json& outputs);

}  // namespace apw
