#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsep/phasor.hpp"
#include "dsep/types.hpp"

namespace dsep {

/// Closed channel vocabulary. Enumerator order is the canonical column order.
enum class Channel { va, vb, vc, vab, vbc, vca, ia, ib, ic, v, i };

inline constexpr std::array<Channel, 11> kAllChannels{
    Channel::va, Channel::vb, Channel::vc, Channel::vab, Channel::vbc, Channel::vca,
    Channel::ia, Channel::ib, Channel::ic, Channel::v, Channel::i};

std::string_view channel_name(Channel c) noexcept;
std::optional<Channel> parse_channel(std::string_view name) noexcept;
bool is_voltage(Channel c) noexcept;

constexpr Channel phase_voltage(Phase p) noexcept { return static_cast<Channel>(index(p)); }
constexpr Channel line_voltage(PhasePair p) noexcept { return static_cast<Channel>(3 + index(p)); }
constexpr Channel line_current(Phase p) noexcept { return static_cast<Channel>(6 + index(p)); }

/// Channels a window must carry for a given load connection.
std::vector<Channel> required_channels(ConnectionKind conn);

/// Uniformly sampled multi-channel record. Immutable once built; construct
/// through make_window so the shape invariants always hold.
class SampledWindow {
public:
    using ChannelMap = std::map<Channel, std::vector<double>>;

    double dt() const noexcept { return dt_; }
    double t0() const noexcept { return t0_; }
    std::size_t size() const noexcept { return n_; }
    double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }

    bool has(Channel c) const { return channels_.contains(c); }
    /// Throws Error(ChannelMismatch) when the channel is absent.
    std::span<const double> channel(Channel c) const;
    const ChannelMap& channels() const noexcept { return channels_; }

    /// Samples [first, first + count). Throws Error(WindowTooShort) if the
    /// result would hold fewer than 3 samples or run past the end.
    SampledWindow slice(std::size_t first, std::size_t count) const;
    /// Every sample multiplied by `factor`.
    SampledWindow scaled(double factor) const;

private:
    friend SampledWindow make_window(double, ChannelMap, double);

    SampledWindow(double dt, double t0, std::size_t n, ChannelMap channels)
        : dt_(dt), t0_(t0), n_(n), channels_(std::move(channels)) {}

    double dt_;
    double t0_;
    std::size_t n_;
    ChannelMap channels_;
};

/// Validates shape: dt > 0, every vector the same length n >= 3, at least one
/// channel, finite samples.
/// Errors: NonPositiveDt, LengthMismatch, NonFinite.
SampledWindow make_window(double dt, SampledWindow::ChannelMap channel_data, double t0 = 0.0);

/// Same as above, keyed by channel name. Errors additionally: UnknownChannel.
SampledWindow make_window(double dt, const std::map<std::string, std::vector<double>>& channel_data,
                          double t0 = 0.0);

/// Adds zero-mean uniform noise on [-fraction * peak, +fraction * peak] to each
/// channel, where peak is that channel's max |sample|. Deterministic in `seed`.
SampledWindow inject_noise(const SampledWindow& w, double fraction, std::uint64_t seed);

/// Least-squares fit of a DC offset plus a cosine/sine pair at f0 to the
/// samples (first sample at time t0). On an integer number of cycles with an
/// integer number of samples per cycle this is the single-bin DFT.
/// Returns the RMS phasor, cosine reference.
Phasor fundamental_phasor(std::span<const double> samples, double dt, double f0, double t0 = 0.0);

}  // namespace dsep
