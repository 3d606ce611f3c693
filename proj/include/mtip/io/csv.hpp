#pragma once

// CSV output: 17 significant digits, '.' decimal point, ',' separator, '\n'
// line endings and exactly one header row.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mtip/core/errors.hpp"
#include "mtip/core/integrator.hpp"
#include "mtip/experiments/hysteresis.hpp"
#include "mtip/experiments/intermittency.hpp"
#include "mtip/experiments/multistability.hpp"
#include "mtip/experiments/tongue.hpp"
#include "mtip/observables/amplitude.hpp"

namespace mtip::io {

class IoError : public Error {
public:
    using Error::Error;
};

/// Shortest text that parses back to the same binary64 value.
inline std::string format_double(double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
    double v = 0.0;
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw InvalidArgument("not a number: '" + std::string(s) + "'");
    return v;
}

namespace schema {
inline const std::vector<std::string> trajectory{"t", "h"};
inline const std::vector<std::string> envelope{"t_center", "c", "amp"};
inline const std::vector<std::string> sweep{"c", "amp", "class", "p", "q"};
inline const std::vector<std::string> tongue{"c", "tau", "amp", "class", "p", "q"};
inline const std::vector<std::string> events{"c", "drop"};
inline const std::vector<std::string> rises{"c", "rise"};
inline const std::vector<std::string> residence{"delta_c", "seed", "fraction_lower", "visits_upper",
                                                "visits_lower"};
inline const std::vector<std::string> multistability{"group", "class", "p", "q", "amp", "basin_count"};
inline const std::vector<std::string> trials{"trial", "h0", "amp", "class", "p", "q", "group"};
}  // namespace schema

/// Buffered row writer; every failure surfaces as IoError.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) throw IoError("cannot open " + path.string() + " for writing");
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) line_ += ',';
            line_ += header[i];
        }
        flush_line();
    }

    CsvWriter& operator<<(double v) { return field(format_double(v)); }
    CsvWriter& operator<<(std::int64_t v) { return field(std::to_string(v)); }
    CsvWriter& operator<<(std::uint64_t v) { return field(std::to_string(v)); }
    CsvWriter& operator<<(int v) { return field(std::to_string(v)); }
    CsvWriter& operator<<(std::string_view s) { return field(std::string(s)); }

    void end_row() { flush_line(); }

    void close() {
        out_.close();
        if (out_.fail()) throw IoError("failed writing " + path_.string());
    }

private:
    CsvWriter& field(const std::string& s) {
        if (!first_) line_ += ',';
        line_ += s;
        first_ = false;
        return *this;
    }

    void flush_line() {
        line_ += '\n';
        out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
        if (!out_) throw IoError("failed writing " + path_.string());
        line_.clear();
        first_ = true;
    }

    std::filesystem::path path_;
    std::ofstream out_;
    std::string line_;
    bool first_ = true;
};

namespace detail {

inline void write_class(CsvWriter& w, const AttractorClass& cls) {
    const auto r = cls.ratio();
    w << cls.name() << (r ? r->p : 0) << (r ? r->q : 0);
}

}  // namespace detail

inline void write_trajectory(const std::filesystem::path& path, const TimeSeries& ts) {
    CsvWriter w(path, schema::trajectory);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        w << ts.time_at(i) << ts.values[i];
        w.end_row();
    }
    w.close();
}

/// c is written as nan for an untagged envelope.
inline void write_envelope(const std::filesystem::path& path, const AmplitudeSeries& a) {
    CsvWriter w(path, schema::envelope);
    for (std::size_t i = 0; i < a.size(); ++i) {
        w << a.centers[i] << (a.c_values.empty() ? std::numeric_limits<double>::quiet_NaN() : a.c_values[i])
          << a.amps[i];
        w.end_row();
    }
    w.close();
}

/// One row per envelope window, classified by its covering checkpoint.
inline void write_sweep(const std::filesystem::path& path, const experiments::SweepResult& s) {
    CsvWriter w(path, schema::sweep);
    for (std::size_t i = 0; i < s.envelope.size(); ++i) {
        w << s.envelope.c_values[i] << s.envelope.amps[i];
        const auto* cp = s.checkpoint_for(i);
        detail::write_class(w, cp ? cp->cls : AttractorClass{});
        w.end_row();
    }
    w.close();
}

inline void write_tongue(const std::filesystem::path& path, const experiments::TongueMap& m) {
    CsvWriter w(path, schema::tongue);
    for (std::size_t r = 0; r < m.tau_grid.size(); ++r)
        for (std::size_t c = 0; c < m.c_grid.size(); ++c) {
            w << m.c_grid[c] << m.tau_grid[r] << m.amp(r, c);
            detail::write_class(w, m.cls(r, c));
            w.end_row();
        }
    w.close();
}

inline void write_events(const std::filesystem::path& path, std::span<const experiments::DropEvent> ev,
                         const std::vector<std::string>& header = schema::events) {
    CsvWriter w(path, header);
    for (const auto& e : ev) {
        w << e.c << e.size;
        w.end_row();
    }
    w.close();
}

inline void write_residence(const std::filesystem::path& path,
                            std::span<const experiments::IntermittencyResult> rs) {
    CsvWriter w(path, schema::residence);
    for (const auto& r : rs) {
        w << r.delta_c << r.seed << r.stats.fraction_lower << r.stats.visits_upper << r.stats.visits_lower;
        w.end_row();
    }
    w.close();
}

inline void write_multistability(const std::filesystem::path& groups_path,
                                 const std::filesystem::path& trials_path,
                                 const experiments::MultistabilityReport& rep) {
    CsvWriter g(groups_path, schema::multistability);
    for (std::size_t i = 0; i < rep.groups.size(); ++i) {
        const auto& s = rep.groups[i];
        g << static_cast<std::uint64_t>(i);
        detail::write_class(g, s.cls);
        g << s.amp << static_cast<std::uint64_t>(s.basin_count);
        g.end_row();
    }
    g.close();

    CsvWriter t(trials_path, schema::trials);
    for (const auto& o : rep.trials) {
        t << static_cast<std::uint64_t>(o.trial) << o.h0 << o.amp;
        detail::write_class(t, o.cls);
        t << static_cast<std::uint64_t>(o.group);
        t.end_row();
    }
    t.close();
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw InvalidArgument("no column '" + std::string(name) + "'");
    }
    std::vector<double> numbers(std::string_view name) const {
        const auto k = column(name);
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(parse_double(r.at(k)));
        return out;
    }
};

/// Reads files in the format written above (no quoting).
inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    auto split = [](const std::string& line) {
        std::vector<std::string> f;
        std::size_t a = 0;
        for (std::size_t b; (b = line.find(',', a)) != std::string::npos; a = b + 1) f.push_back(line.substr(a, b - a));
        f.push_back(line.substr(a));
        return f;
    };
    CsvTable t;
    std::string line;
    if (std::getline(in, line)) t.header = split(line);
    while (std::getline(in, line)) t.rows.push_back(split(line));
    return t;
}

}  // namespace mtip::io
