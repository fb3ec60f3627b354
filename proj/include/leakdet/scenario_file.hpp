#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leakdet/synth.hpp"

// Scenario configuration files: line-oriented key = value pairs with
// nested source { ... } blocks. Unknown keys are rejected with the line
// number; comments start with '#'.
//
//   duration_s = 3600
//   seed = 42
//   ambient_level_db = -60
//   source {
//     kind = leak_spray          # leak_spray|leak_jet|ambient|impulse|persistent_noise
//     shape = flat_above_6khz    # optional; defaults by kind
//     level_db = -40
//     t_start_s = 0
//     t_end_s = 3600
//     distance_m = 5.0
//     barriers_db = 22.7, 3.0    # optional list
//   }

namespace leakdet {

class ScenarioParseError : public std::runtime_error {
public:
    ScenarioParseError(const std::string& file, int line, const std::string& what_part)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what_part), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string strip_comment(const std::string& s) {
    const auto pos = s.find('#');
    return pos == std::string::npos ? s : s.substr(0, pos);
}

inline double parse_number(const std::string& file, int line, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ScenarioParseError(file, line, "key '" + key + "' expects a number, got '" + value + "'");
    }
}

inline std::uint64_t parse_seed(const std::string& file, int line, const std::string& value) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used, 0);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ScenarioParseError(file, line, "key 'seed' expects an unsigned integer, got '" + value + "'");
    }
}

inline SourceKind parse_kind(const std::string& file, int line, const std::string& value) {
    if (value == "leak_spray") return SourceKind::LeakSpray;
    if (value == "leak_jet") return SourceKind::LeakJet;
    if (value == "ambient") return SourceKind::Ambient;
    if (value == "impulse") return SourceKind::Impulse;
    if (value == "persistent_noise") return SourceKind::PersistentNoise;
    throw ScenarioParseError(file, line, "unknown source kind '" + value + "'");
}

inline SpectralShape parse_shape(const std::string& file, int line, const std::string& value) {
    if (value == "flat_above_6khz") return SpectralShape::FlatAbove6kHz;
    if (value == "low_pass_jet") return SpectralShape::LowPassJet;
    if (value == "broadband") return SpectralShape::Broadband;
    if (value == "click") return SpectralShape::Click;
    throw ScenarioParseError(file, line, "unknown spectral shape '" + value + "'");
}

inline std::vector<double> parse_number_list(const std::string& file, int line, const std::string& key,
                                             const std::string& value) {
    std::vector<double> out;
    std::string item;
    std::string normalized = value;
    for (char& c : normalized)
        if (c == ',') c = ' ';
    std::istringstream iss(normalized);
    while (iss >> item) out.push_back(parse_number(file, line, key, item));
    if (out.empty()) throw ScenarioParseError(file, line, "key '" + key + "' expects at least one number");
    return out;
}

struct SourceDraft {
    bool has_kind = false, has_shape = false, has_level = false;
    bool has_t_start = false, has_t_end = false, has_distance = false;
    int open_line = 0;
    PlacedSource placed;
};

} // namespace detail

inline Scenario parse_scenario(std::istream& in, const std::string& file_name = "<scenario>") {
    Scenario scenario;
    bool has_duration = false, has_seed = false, has_ambient = false;

    detail::SourceDraft draft;
    bool in_source = false;
    std::string raw;
    int line_no = 0;

    auto finish_source = [&](int line) {
        if (!draft.has_kind) throw ScenarioParseError(file_name, line, "source block is missing key 'kind'");
        if (!draft.has_level) throw ScenarioParseError(file_name, line, "source block is missing key 'level_db'");
        if (!draft.has_t_start) throw ScenarioParseError(file_name, line, "source block is missing key 't_start_s'");
        if (!draft.has_t_end) throw ScenarioParseError(file_name, line, "source block is missing key 't_end_s'");
        if (!draft.has_distance) throw ScenarioParseError(file_name, line, "source block is missing key 'distance_m'");
        if (!draft.has_shape) draft.placed.source.shape = default_shape(draft.placed.source.kind);
        if (!(draft.placed.source.t_start_s < draft.placed.source.t_end_s))
            throw ScenarioParseError(file_name, line, "source requires t_start_s < t_end_s");
        if (!std::isfinite(draft.placed.source.level_db))
            throw ScenarioParseError(file_name, line, "source level_db must be finite");
        if (draft.placed.path.distance_m < kMinDistanceM)
            throw ScenarioParseError(file_name, line, "distance_m must be at least 0.1");
        scenario.sources.push_back(draft.placed);
        draft = detail::SourceDraft{};
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = detail::trim(detail::strip_comment(raw));
        if (line.empty()) continue;

        if (line == "source {") {
            if (in_source) throw ScenarioParseError(file_name, line_no, "source blocks cannot nest");
            in_source = true;
            draft.open_line = line_no;
            continue;
        }
        if (line == "}") {
            if (!in_source) throw ScenarioParseError(file_name, line_no, "'}' without an open source block");
            finish_source(line_no);
            in_source = false;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioParseError(file_name, line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (value.empty()) throw ScenarioParseError(file_name, line_no, "key '" + key + "' has no value");

        if (!in_source) {
            if (key == "duration_s") {
                if (has_duration) throw ScenarioParseError(file_name, line_no, "duplicate key 'duration_s'");
                scenario.duration_s = detail::parse_number(file_name, line_no, key, value);
                if (scenario.duration_s <= 0.0) throw ScenarioParseError(file_name, line_no, "duration_s must be positive");
                has_duration = true;
            } else if (key == "seed") {
                if (has_seed) throw ScenarioParseError(file_name, line_no, "duplicate key 'seed'");
                scenario.seed = detail::parse_seed(file_name, line_no, value);
                has_seed = true;
            } else if (key == "ambient_level_db") {
                if (has_ambient) throw ScenarioParseError(file_name, line_no, "duplicate key 'ambient_level_db'");
                if (value == "-inf") {
                    scenario.ambient_level_db = kSilentLevelDb;
                } else {
                    scenario.ambient_level_db = detail::parse_number(file_name, line_no, key, value);
                }
                has_ambient = true;
            } else {
                throw ScenarioParseError(file_name, line_no, "unknown key '" + key + "'");
            }
            continue;
        }

        auto& src = draft.placed.source;
        if (key == "kind") {
            if (draft.has_kind) throw ScenarioParseError(file_name, line_no, "duplicate key 'kind'");
            src.kind = detail::parse_kind(file_name, line_no, value);
            draft.has_kind = true;
        } else if (key == "shape") {
            if (draft.has_shape) throw ScenarioParseError(file_name, line_no, "duplicate key 'shape'");
            src.shape = detail::parse_shape(file_name, line_no, value);
            draft.has_shape = true;
        } else if (key == "level_db") {
            if (draft.has_level) throw ScenarioParseError(file_name, line_no, "duplicate key 'level_db'");
            src.level_db = detail::parse_number(file_name, line_no, key, value);
            draft.has_level = true;
        } else if (key == "t_start_s") {
            if (draft.has_t_start) throw ScenarioParseError(file_name, line_no, "duplicate key 't_start_s'");
            src.t_start_s = detail::parse_number(file_name, line_no, key, value);
            draft.has_t_start = true;
        } else if (key == "t_end_s") {
            if (draft.has_t_end) throw ScenarioParseError(file_name, line_no, "duplicate key 't_end_s'");
            src.t_end_s = detail::parse_number(file_name, line_no, key, value);
            draft.has_t_end = true;
        } else if (key == "distance_m") {
            if (draft.has_distance) throw ScenarioParseError(file_name, line_no, "duplicate key 'distance_m'");
            draft.placed.path.distance_m = detail::parse_number(file_name, line_no, key, value);
            draft.has_distance = true;
        } else if (key == "barriers_db") {
            if (!draft.placed.path.barrier_losses_db.empty())
                throw ScenarioParseError(file_name, line_no, "duplicate key 'barriers_db'");
            draft.placed.path.barrier_losses_db = detail::parse_number_list(file_name, line_no, key, value);
        } else {
            throw ScenarioParseError(file_name, line_no, "unknown key '" + key + "' in source block");
        }
    }

    if (in_source) throw ScenarioParseError(file_name, draft.open_line, "source block is never closed");
    if (!has_duration) throw ScenarioParseError(file_name, line_no, "missing required key 'duration_s'");
    if (!has_seed) throw ScenarioParseError(file_name, line_no, "missing required key 'seed'");
    if (!has_ambient) throw ScenarioParseError(file_name, line_no, "missing required key 'ambient_level_db'");
    return scenario;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    return parse_scenario(in, path);
}

inline const char* kind_name(SourceKind k) {
    switch (k) {
        case SourceKind::LeakSpray: return "leak_spray";
        case SourceKind::LeakJet: return "leak_jet";
        case SourceKind::Ambient: return "ambient";
        case SourceKind::Impulse: return "impulse";
        case SourceKind::PersistentNoise: return "persistent_noise";
    }
    return "?";
}

inline const char* shape_name(SpectralShape s) {
    switch (s) {
        case SpectralShape::FlatAbove6kHz: return "flat_above_6khz";
        case SpectralShape::LowPassJet: return "low_pass_jet";
        case SpectralShape::Broadband: return "broadband";
        case SpectralShape::Click: return "click";
    }
    return "?";
}

inline std::string write_scenario(const Scenario& s) {
    std::ostringstream out;
    out.precision(17);
    out << "duration_s = " << s.duration_s << "\n";
    out << "seed = " << s.seed << "\n";
    if (s.ambient_level_db <= kSilentLevelDb) {
        out << "ambient_level_db = -inf\n";
    } else {
        out << "ambient_level_db = " << s.ambient_level_db << "\n";
    }
    for (const auto& placed : s.sources) {
        out << "source {\n";
        out << "  kind = " << kind_name(placed.source.kind) << "\n";
        out << "  shape = " << shape_name(placed.source.shape) << "\n";
        out << "  level_db = " << placed.source.level_db << "\n";
        out << "  t_start_s = " << placed.source.t_start_s << "\n";
        out << "  t_end_s = " << placed.source.t_end_s << "\n";
        out << "  distance_m = " << placed.path.distance_m << "\n";
        if (!placed.path.barrier_losses_db.empty()) {
            out << "  barriers_db =";
            for (std::size_t i = 0; i < placed.path.barrier_losses_db.size(); ++i) {
                out << (i ? ", " : " ") << placed.path.barrier_losses_db[i];
            }
            out << "\n";
        }
        out << "}\n";
    }
    return out.str();
}

} // namespace leakdet
