#pragma once

// JSONL trace format, corpus manifest, and content hashing.
//
// One JSON object per line:
//   {"session_id", "t_ms", "lat", "lon", "accuracy_m",
//    "net_hint"?: {"lat", "lon", "accuracy_m"},
//    "raw_fixes"?: [[lat, lon, accuracy_m], ...],
//    "label"?, "scenario"?}
// Consecutive lines sharing a session_id form one trace. Unknown fields are
// rejected in strict mode and warned about otherwise.

#include <string>
#include <vector>

#include "tracegen.hpp"

namespace locgate {

// Canonical one-line serialization of a fix (plus optional trace metadata).
std::string serialize_fix_line(const Fix& fix, const std::optional<TraceLabel>& label,
                               const std::optional<Scenario>& scenario);

std::string serialize_corpus(const Corpus& corpus);

struct ParseWarnings {
    std::vector<std::string> messages;
};

// Parses and groups a JSONL document; errors carry 1-based line numbers.
std::vector<Trace> parse_traces(const std::string& text, bool strict,
                                ParseWarnings* warnings = nullptr);

std::vector<Trace> load_traces_file(const std::string& path, bool strict,
                                    ParseWarnings* warnings = nullptr);

// "fnv1a64:<16 hex digits>" over the serialized corpus bytes.
std::string corpus_content_hash(const Corpus& corpus);
std::string content_hash_of_bytes(const std::string& bytes);

// Manifest: PRNG id, seed, config snapshot, counts and the content hash.
std::string manifest_json(const Corpus& corpus, const std::string& content_hash);
std::string manifest_json(const Corpus& corpus);

// Writes the corpus JSONL plus "<path>.manifest.json"; returns the hash.
std::string save_corpus(const Corpus& corpus, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace locgate
