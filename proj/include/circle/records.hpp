// Structured run records: stable JSON objects carrying the resolved
// configuration and its hash, emitted as JSONL or CSV.
#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace circle {

inline constexpr int kSchemaVersion = 1;

// Assembles {schema_version, kind, config, config_hash, ...fields}.  Keys
// are emitted in sorted order, so identical inputs give identical bytes;
// no timestamps are included.
nlohmann::json make_record(const std::string& kind,
                           const nlohmann::json& config,
                           nlohmann::json fields);

// JSONL writes one compact object per line.  CSV flattens each record with
// JSON-pointer column names; the header row is fixed by the first record
// and later records must share its columns.
class RecordWriter {
  public:
    RecordWriter(std::ostream& out, std::string format);
    void emit(const nlohmann::json& rec);

  private:
    std::ostream* out_;
    std::string format_;
    std::vector<std::string> header_;
};

}  // namespace circle
