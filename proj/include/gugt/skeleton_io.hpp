#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "gugt/skeleton.hpp"

namespace gugt {

enum class SessionFormat { Jsonl, Csv };

// JSONL: a header object on the first line, then one frame per line:
//   {"subject": "S01", "trial": "T1", "label": "low"|"high"|null, "fps_hint": 30|null}
//   {"t": 0, "j": [[x,y,z] x20], "trk": [true x20]}
// CSV: two '#' metadata lines (column names, then values), a column header,
// then one row per frame: t, j0x, j0y, j0z, trk0, ..., j19x, j19y, j19z, trk19.
// Unlabeled sessions carry no label field/column at all.
//
// Doubles are written in shortest round-trip form, so parse(write(s)) == s.

Session parse_session(std::istream& in, SessionFormat format);
void write_session(const Session& session, SessionFormat format, std::ostream& out);

/// Picks the format from the extension (.csv, anything else is JSONL).
SessionFormat format_for_path(const std::filesystem::path& path);

Session load_session(const std::filesystem::path& path);
void save_session(const Session& session, const std::filesystem::path& path);

}  // namespace gugt
