#include "dsep/cli/waveform_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dsep/cli/io.hpp"
#include "dsep/error.hpp"

namespace dsep::cli {
namespace {

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::ParseError, message); }

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        const auto first = cell.find_first_not_of(" \t");
        const auto last = cell.find_last_not_of(" \t\r");
        cells.push_back(first == std::string::npos ? std::string() : cell.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& cell, std::size_t row) {
    double v = 0.0;
    const char* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (ec != std::errc() || ptr != end || cell.empty())
        fail("row " + std::to_string(row) + ": '" + cell + "' is not a number");
    return v;
}

}  // namespace

void write_waveform_csv(std::ostream& out, const SampledWindow& w) {
    out << 't';
    for (const auto& [channel, samples] : w.channels()) out << ',' << channel_name(channel);
    out << '\n';
    char buf[32];
    for (std::size_t k = 0; k < w.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", w.time(k));
        out << buf;
        for (const auto& [channel, samples] : w.channels()) {
            std::snprintf(buf, sizeof buf, "%.17g", samples[k]);
            out << ',' << buf;
        }
        out << '\n';
    }
}

void write_waveform_csv(const std::filesystem::path& path, const SampledWindow& w) {
    std::ostringstream ss;
    write_waveform_csv(ss, w);
    write_file_atomic(path, ss.str());
}

SampledWindow read_waveform_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) fail("empty waveform file");
    const std::vector<std::string> header = split(line);
    if (header.empty() || header.front() != "t") fail("first column must be 't'");
    if (header.size() < 2) fail("no channel columns");

    std::vector<Channel> channels;
    for (std::size_t c = 1; c < header.size(); ++c) {
        const auto ch = parse_channel(header[c]);
        if (!ch) throw Error(ErrorCode::UnknownChannel, "unknown channel '" + header[c] + "'");
        for (Channel seen : channels)
            if (seen == *ch) fail("duplicate channel '" + header[c] + "'");
        channels.push_back(*ch);
    }

    std::vector<double> t;
    std::vector<std::vector<double>> columns(channels.size());
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() != header.size())
            fail("row " + std::to_string(row) + " has " + std::to_string(cells.size()) + " cells, expected " +
                 std::to_string(header.size()));
        t.push_back(parse_double(cells[0], row));
        for (std::size_t c = 0; c < channels.size(); ++c) columns[c].push_back(parse_double(cells[c + 1], row));
    }
    if (t.size() < 3) fail("waveform needs at least 3 samples, got " + std::to_string(t.size()));

    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0.0) || !std::isfinite(dt)) fail("'t' must be strictly increasing");
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double step = t[k] - t[k - 1];
        if (!(step > 0.0)) fail("'t' must be strictly increasing (row " + std::to_string(k + 2) + ")");
        if (std::abs(step - dt) > 1e-9 * dt)
            fail("non-uniform time step at row " + std::to_string(k + 2));
    }

    SampledWindow::ChannelMap map;
    for (std::size_t c = 0; c < channels.size(); ++c) map[channels[c]] = std::move(columns[c]);
    return make_window(dt, std::move(map), t.front());
}

SampledWindow read_waveform_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open waveform '" + path.string() + "'");
    return read_waveform_csv(in);
}

}  // namespace dsep::cli
