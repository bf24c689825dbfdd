#pragma once

#include <filesystem>
#include <iosfwd>

#include "dsep/window.hpp"

namespace dsep::cli {

/// Header `t,<channel>,...` in canonical channel order, then one row per
/// sample. Values use 17 significant digits so a read returns the same
/// doubles.
void write_waveform_csv(std::ostream& out, const SampledWindow& w);
void write_waveform_csv(const std::filesystem::path& path, const SampledWindow& w);

/// Requires a leading `t` column, known channel names, rectangular numeric
/// rows, at least 3 samples and a constant step (1e-9 relative).
/// Errors: Error(ParseError), UnknownChannel, NonFinite.
SampledWindow read_waveform_csv(std::istream& in);
SampledWindow read_waveform_csv(const std::filesystem::path& path);

}  // namespace dsep::cli
