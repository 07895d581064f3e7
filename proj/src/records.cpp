#include "circle/records.hpp"

#include <ostream>

#include "circle/common.hpp"

namespace circle {

nlohmann::json make_record(const std::string& kind,
                           const nlohmann::json& config,
                           nlohmann::json fields) {
    nlohmann::json rec = std::move(fields);
    rec["schema_version"] = kSchemaVersion;
    rec["kind"] = kind;
    rec["config"] = config;
    rec["config_hash"] = hex64(fnv1a(config.dump()));
    return rec;
}

RecordWriter::RecordWriter(std::ostream& out, std::string format)
    : out_(&out), format_(std::move(format)) {
    if (format_ != "jsonl" && format_ != "csv")
        throw input_error("record format must be jsonl or csv, got '" +
                          format_ + "'");
}

namespace {

std::string csv_cell(const nlohmann::json& v) {
    std::string s;
    if (v.is_string())
        s = v.get<std::string>();
    else
        s = v.dump();
    bool quote = s.find_first_of(",\"\n") != std::string::npos;
    if (!quote) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

}  // namespace

void RecordWriter::emit(const nlohmann::json& rec) {
    if (format_ == "jsonl") {
        *out_ << rec.dump() << '\n';
        return;
    }
    nlohmann::json flat = rec.flatten();
    if (header_.empty()) {
        for (auto it = flat.begin(); it != flat.end(); ++it)
            header_.push_back(it.key());
        for (size_t i = 0; i < header_.size(); ++i)
            *out_ << (i ? "," : "") << csv_cell(header_[i]);
        *out_ << '\n';
    }
    if (flat.size() != header_.size())
        throw consistency_error(
            "csv records must share the first record's columns");
    std::string row;
    for (size_t i = 0; i < header_.size(); ++i) {
        auto it = flat.find(header_[i]);
        if (it == flat.end())
            throw consistency_error(
                "csv records must share the first record's columns");
        row += (i ? "," : "") + csv_cell(*it);
    }
    *out_ << row << '\n';
}

}  // namespace circle
