#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smurf/error.hpp"

namespace smurf::io {

/// One candidate caption with its references. `references` may be empty for
/// referenceless scoring.
struct CaptionRecord {
  std::string id;
  std::string candidate;
  std::vector<std::string> references;
  std::optional<std::string> system;
  std::optional<double> human_score;
};

namespace detail {

inline CaptionRecord parse_record(const nlohmann::json& j) {
  CaptionRecord r;
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "record is not a JSON object");
  if (!j.contains("id") || !j.contains("candidate"))
    throw Error(ErrorCode::MalformedInput, "record needs \"id\" and \"candidate\"");
  const auto& id = j.at("id");
  r.id = id.is_string() ? id.get<std::string>() : id.dump();
  if (r.id.empty()) throw Error(ErrorCode::MalformedInput, "record id is empty");
  if (!j.at("candidate").is_string()) throw Error(ErrorCode::MalformedInput, "candidate must be a string");
  r.candidate = j.at("candidate").get<std::string>();
  if (j.contains("references")) {
    if (!j.at("references").is_array()) throw Error(ErrorCode::MalformedInput, "references must be an array");
    for (const auto& ref : j.at("references")) {
      if (!ref.is_string()) throw Error(ErrorCode::MalformedInput, "reference must be a string");
      r.references.push_back(ref.get<std::string>());
    }
  }
  if (j.contains("system") && !j.at("system").is_null()) r.system = j.at("system").get<std::string>();
  if (j.contains("human_score") && !j.at("human_score").is_null()) {
    r.human_score = j.at("human_score").get<double>();
  } else if (j.contains("human_scores") && j.at("human_scores").is_array() && !j.at("human_scores").empty()) {
    // Several graders (e.g. three experts): their arithmetic mean.
    double sum = 0.0;
    for (const auto& v : j.at("human_scores")) sum += v.get<double>();
    r.human_score = sum / static_cast<double>(j.at("human_scores").size());
  }
  return r;
}

}  // namespace detail

inline CaptionRecord record_from_json(const nlohmann::json& j) {
  try {
    return detail::parse_record(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
}

inline nlohmann::json record_to_json(const CaptionRecord& r) {
  nlohmann::json j{{"id", r.id}, {"candidate", r.candidate}, {"references", r.references}};
  if (r.system) j["system"] = *r.system;
  if (r.human_score) j["human_score"] = *r.human_score;
  return j;
}

/// Calls `fn(line_number, json)` for every nonblank line. Parse errors are
/// reported with their 1-based line number.
inline void for_each_jsonl(const std::string& path,
                           const std::function<void(std::size_t, const nlohmann::json&)>& fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Configuration, "cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedInput, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    fn(line_no, j);
  }
}

inline std::vector<nlohmann::json> read_jsonl(const std::string& path) {
  std::vector<nlohmann::json> out;
  for_each_jsonl(path, [&](std::size_t, const nlohmann::json& j) { out.push_back(j); });
  return out;
}

inline std::vector<CaptionRecord> read_records(const std::string& path) {
  std::vector<CaptionRecord> out;
  for_each_jsonl(path, [&](std::size_t line_no, const nlohmann::json& j) {
    try {
      out.push_back(record_from_json(j));
    } catch (const Error& e) {
      throw Error(ErrorCode::MalformedInput, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  });
  return out;
}

}  // namespace smurf::io
