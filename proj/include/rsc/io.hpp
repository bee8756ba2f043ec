#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsc/common.hpp"
#include "rsc/ensemble.hpp"

namespace rsc {

inline constexpr const char* kArtifactVersion = "1.0.0";

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Provenance block written at the top of every output file (as `# key=value`
/// comment lines in CSV, as a `meta` object in JSON). A run is
/// reconstructible from its output alone.
using Provenance = std::vector<std::pair<std::string, std::string>>;

inline const char* kRecordCsvHeader =
    "realization,alpha,L,boundary,left,right,d,j_eff,cxx,czz,F,N,E,C,eof";

inline void write_records_csv(std::ostream& os, const std::vector<RealizationRecord>& records,
                              const Provenance& prov) {
    os << "# artifact_version=" << kArtifactVersion << "\n";
    for (const auto& [k, v] : prov) os << "# " << k << "=" << v << "\n";
    os << kRecordCsvHeader << "\n";
    for (const auto& r : records) {
        os << r.realization << ',' << format_double(r.alpha) << ',' << r.length << ','
           << to_string(r.boundary) << ',' << r.left << ',' << r.right << ',' << r.distance << ','
           << format_double(r.j_eff) << ',' << format_double(r.cxx) << ','
           << format_double(r.czz) << ',' << format_double(r.panel.fidelity) << ','
           << format_double(r.panel.negativity) << ',' << format_double(r.panel.log_negativity)
           << ',' << format_double(r.panel.concurrence) << ',' << format_double(r.panel.eof)
           << "\n";
    }
}

inline std::vector<RealizationRecord> read_records_csv(std::istream& is) {
    std::vector<RealizationRecord> records;
    std::string line;
    bool saw_header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != kRecordCsvHeader)
                throw Error("records csv: unexpected header: " + line);
            saw_header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 15) throw Error("records csv: malformed row: " + line);
        RealizationRecord r;
        try {
            r.realization = std::stoull(fields[0]);
            r.alpha = std::stod(fields[1]);
            r.length = std::stoi(fields[2]);
            r.boundary = boundary_from_string(fields[3]);
            r.left = std::stoi(fields[4]);
            r.right = std::stoi(fields[5]);
            r.distance = std::stoi(fields[6]);
            r.j_eff = std::stod(fields[7]);
            r.cxx = std::stod(fields[8]);
            r.czz = std::stod(fields[9]);
            r.panel.fidelity = std::stod(fields[10]);
            r.panel.negativity = std::stod(fields[11]);
            r.panel.log_negativity = std::stod(fields[12]);
            r.panel.concurrence = std::stod(fields[13]);
            r.panel.eof = std::stod(fields[14]);
        } catch (const std::exception&) {
            throw Error("records csv: unparsable row: " + line);
        }
        records.push_back(r);
    }
    if (!saw_header) throw Error("records csv: missing header row");
    return records;
}

inline void write_survey_csv(std::ostream& os,
                             const std::vector<std::pair<int, std::vector<SurveyEntry>>>& chains,
                             const Provenance& prov) {
    os << "# artifact_version=" << kArtifactVersion << "\n";
    for (const auto& [k, v] : prov) os << "# " << k << "=" << v << "\n";
    os << "chain_id,i,j,d,F\n";
    for (const auto& [chain_id, entries] : chains)
        for (const auto& e : entries)
            os << chain_id << ',' << e.i << ',' << e.j << ',' << e.distance << ','
               << format_double(e.fidelity) << "\n";
}

inline nlohmann::json provenance_json(const Provenance& prov) {
    nlohmann::json j;
    j["artifact_version"] = kArtifactVersion;
    for (const auto& [k, v] : prov) j[k] = v;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open for writing: " + path);
    os << content;
    if (!os) throw Error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open for reading: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace rsc
