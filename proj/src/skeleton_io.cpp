#include "gugt/skeleton_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gugt/error.hpp"

namespace gugt {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void malformed(std::size_t line, const std::string& reason) {
  throw Error(ErrorCode::MalformedRecord, "line " + std::to_string(line) + ": " + reason);
}

RiskLabel label_from_text(std::string_view text, std::size_t line) {
  if (text == "low") return RiskLabel::LowRisk;
  if (text == "high") return RiskLabel::HighRisk;
  if (text.empty() || text == "null") return RiskLabel::Unlabeled;
  malformed(line, "unknown label '" + std::string(text) + "'");
}

void check_advance(const Session& s, std::int64_t t, std::size_t line) {
  if (t < 0) malformed(line, "negative timestamp");
  if (!s.frames.empty() && t <= s.frames.back().t_ms) {
    throw Error(ErrorCode::NonMonotonicTimestamp,
                "line " + std::to_string(line) + ": t=" + std::to_string(t) +
                    " after t=" + std::to_string(s.frames.back().t_ms));
  }
}

void check_depths(const SkeletonFrame& f, std::size_t line) {
  for (std::size_t j = 0; j < kJointCount; ++j) {
    if (f.tracked[j] && !(f.positions[j].z > 0.0)) {
      malformed(line, "tracked joint " + std::to_string(j) + " has non-positive depth");
    }
  }
}

// ---- JSONL ---------------------------------------------------------------

double json_number(const json& v, std::size_t line) {
  if (!v.is_number()) malformed(line, "expected a number");
  return v.get<double>();
}

void parse_jsonl_header(const json& h, Session& s, std::size_t line) {
  if (!h.is_object()) malformed(line, "header is not an object");
  if (!h.contains("subject") || !h["subject"].is_string()) malformed(line, "header needs a string 'subject'");
  if (!h.contains("trial") || !h["trial"].is_string()) malformed(line, "header needs a string 'trial'");
  s.subject_id = h["subject"].get<std::string>();
  s.trial_id = h["trial"].get<std::string>();
  if (h.contains("label") && !h["label"].is_null()) {
    if (!h["label"].is_string()) malformed(line, "label must be a string or null");
    const auto text = h["label"].get<std::string>();
    if (text.empty()) malformed(line, "label must be 'low' or 'high'");
    s.label = label_from_text(text, line);
  }
  if (h.contains("fps_hint") && !h["fps_hint"].is_null() && !h["fps_hint"].is_number()) {
    malformed(line, "fps_hint must be a number or null");
  }
}

SkeletonFrame parse_jsonl_frame(const json& o, std::size_t line) {
  if (!o.is_object()) malformed(line, "frame is not an object");
  if (!o.contains("t") || !o["t"].is_number_integer()) malformed(line, "frame needs an integer 't'");
  if (!o.contains("j") || !o["j"].is_array()) malformed(line, "frame needs a joint array 'j'");
  if (!o.contains("trk") || !o["trk"].is_array()) malformed(line, "frame needs a flag array 'trk'");
  const auto& joints = o["j"];
  const auto& flags = o["trk"];
  if (joints.size() != kJointCount || flags.size() != kJointCount) {
    throw Error(ErrorCode::WrongJointCount, "line " + std::to_string(line) + ": expected " +
                                                std::to_string(kJointCount) + " joints, got " +
                                                std::to_string(joints.size()));
  }
  SkeletonFrame f;
  f.t_ms = o["t"].get<std::int64_t>();
  for (std::size_t j = 0; j < kJointCount; ++j) {
    const auto& p = joints[j];
    if (!p.is_array() || p.size() != 3) malformed(line, "joint " + std::to_string(j) + " is not [x,y,z]");
    f.positions[j] = {json_number(p[0], line), json_number(p[1], line), json_number(p[2], line)};
    if (!flags[j].is_boolean()) malformed(line, "tracking flag " + std::to_string(j) + " is not a bool");
    f.tracked[j] = flags[j].get<bool>();
  }
  return f;
}

Session parse_jsonl(std::istream& in) {
  Session s;
  std::string text;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty() || text == "\r") continue;
    json value;
    try {
      value = json::parse(text);
    } catch (const json::parse_error& e) {
      malformed(line, e.what());
    }
    if (!have_header) {
      parse_jsonl_header(value, s, line);
      have_header = true;
      continue;
    }
    auto frame = parse_jsonl_frame(value, line);
    check_advance(s, frame.t_ms, line);
    check_depths(frame, line);
    s.frames.push_back(std::move(frame));
  }
  if (!have_header) malformed(line + 1, "missing header line");
  return s;
}

void write_jsonl(const Session& s, std::ostream& out) {
  ordered_json header;
  header["subject"] = s.subject_id;
  header["trial"] = s.trial_id;
  if (s.label != RiskLabel::Unlabeled) header["label"] = std::string(to_string(s.label));
  header["fps_hint"] = nullptr;
  out << header.dump() << '\n';
  for (const auto& f : s.frames) {
    ordered_json o;
    o["t"] = f.t_ms;
    auto joints = ordered_json::array();
    for (const auto& p : f.positions) joints.push_back({p.x, p.y, p.z});
    o["j"] = std::move(joints);
    auto flags = ordered_json::array();
    for (const bool b : f.tracked) flags.push_back(b);
    o["trk"] = std::move(flags);
    out << o.dump() << '\n';
  }
}

// ---- CSV -----------------------------------------------------------------

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view text, std::size_t line) {
  T value{};
  text = trim(text);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) malformed(line, "bad number '" + std::string(text) + "'");
  return value;
}

std::string csv_column_header() {
  std::string h = "t";
  for (std::size_t j = 0; j < kJointCount; ++j) {
    const auto n = std::to_string(j);
    h += ",j" + n + "x,j" + n + "y,j" + n + "z,trk" + n;
  }
  return h;
}

void append_double(std::string& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

Session parse_csv(std::istream& in) {
  Session s;
  std::string text;
  std::size_t line = 0;
  std::vector<std::string> meta;
  bool have_columns = false;
  const auto expected_columns = 1 + 4 * kJointCount;
  while (std::getline(in, text)) {
    ++line;
    const auto row = trim(text);
    if (row.empty()) continue;
    if (row.front() == '#') {
      if (have_columns) malformed(line, "metadata after the column header");
      meta.emplace_back(row.substr(1));
      continue;
    }
    if (!have_columns) {
      if (meta.size() != 2) malformed(line, "expected two '#' metadata lines before the column header");
      const auto keys = split(meta[0], ',');
      const auto values = split(meta[1], ',');
      if (keys.size() != values.size()) malformed(line, "metadata names and values differ in count");
      bool have_subject = false, have_trial = false;
      for (std::size_t k = 0; k < keys.size(); ++k) {
        const auto key = trim(keys[k]);
        const auto val = trim(values[k]);
        if (key == "subject") {
          s.subject_id = std::string(val);
          have_subject = true;
        } else if (key == "trial") {
          s.trial_id = std::string(val);
          have_trial = true;
        } else if (key == "label") {
          s.label = label_from_text(val, line);
        } else {
          malformed(line, "unknown metadata field '" + std::string(key) + "'");
        }
      }
      if (!have_subject || !have_trial) malformed(line, "metadata needs subject and trial");
      if (row != csv_column_header()) malformed(line, "unexpected column header");
      have_columns = true;
      continue;
    }
    const auto cells = split(row, ',');
    if (cells.size() != expected_columns) {
      throw Error(ErrorCode::WrongJointCount, "line " + std::to_string(line) + ": expected " +
                                                  std::to_string(expected_columns) + " columns, got " +
                                                  std::to_string(cells.size()));
    }
    SkeletonFrame f;
    f.t_ms = parse_number<std::int64_t>(cells[0], line);
    for (std::size_t j = 0; j < kJointCount; ++j) {
      const auto base = 1 + 4 * j;
      f.positions[j] = {parse_number<double>(cells[base], line), parse_number<double>(cells[base + 1], line),
                        parse_number<double>(cells[base + 2], line)};
      const auto flag = trim(cells[base + 3]);
      if (flag != "0" && flag != "1") malformed(line, "tracking flag must be 0 or 1");
      f.tracked[j] = flag == "1";
    }
    check_advance(s, f.t_ms, line);
    check_depths(f, line);
    s.frames.push_back(std::move(f));
  }
  if (!have_columns) malformed(line + 1, "missing metadata or column header");
  return s;
}

void write_csv(const Session& s, std::ostream& out) {
  for (const auto* field : {&s.subject_id, &s.trial_id}) {
    if (field->find_first_of(",\n\r") != std::string::npos) {
      throw Error(ErrorCode::MalformedRecord, "CSV identifiers cannot contain commas or newlines");
    }
  }
  const bool labeled = s.label != RiskLabel::Unlabeled;
  out << (labeled ? "#subject,trial,label\n" : "#subject,trial\n");
  out << '#' << s.subject_id << ',' << s.trial_id;
  if (labeled) out << ',' << to_string(s.label);
  out << '\n' << csv_column_header() << '\n';
  std::string row;
  for (const auto& f : s.frames) {
    row = std::to_string(f.t_ms);
    for (std::size_t j = 0; j < kJointCount; ++j) {
      for (const double v : {f.positions[j].x, f.positions[j].y, f.positions[j].z}) {
        row += ',';
        append_double(row, v);
      }
      row += f.tracked[j] ? ",1" : ",0";
    }
    out << row << '\n';
  }
}

}  // namespace

Session parse_session(std::istream& in, SessionFormat format) {
  return format == SessionFormat::Csv ? parse_csv(in) : parse_jsonl(in);
}

void write_session(const Session& session, SessionFormat format, std::ostream& out) {
  if (format == SessionFormat::Csv) {
    write_csv(session, out);
  } else {
    write_jsonl(session, out);
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing session " + session.subject_id + "/" + session.trial_id);
}

SessionFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? SessionFormat::Csv : SessionFormat::Jsonl;
}

Session load_session(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return parse_session(in, format_for_path(path));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_session(const Session& session, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  write_session(session, format_for_path(path), out);
}

}  // namespace gugt
