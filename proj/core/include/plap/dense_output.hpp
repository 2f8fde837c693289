#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace plap {

/// Piecewise quartic continuous extension of a two-component Dormand-Prince
/// solution. Each segment stores Hairer's five interpolation vectors.
class DenseTrack {
public:
    using Value = std::array<double, 2>;

    struct Segment {
        double r0 = 0.0;
        double h = 0.0;
        std::array<Value, 5> coef{};
        /// Segment was produced by integrating in s = const - r; the
        /// interpolation variable runs backwards and components pick up `sign`.
        bool reversed = false;
        Value sign{1.0, 1.0};

        [[nodiscard]] Value eval(double r) const;
        [[nodiscard]] double end() const { return r0 + h; }
    };

    void append(const Segment& segment);
    /// Segments in ascending r; used after building a reversed track.
    void sortSegments();

    [[nodiscard]] bool empty() const { return segments_.empty(); }
    [[nodiscard]] double begin() const;
    [[nodiscard]] double end() const;
    [[nodiscard]] std::size_t size() const { return segments_.size(); }
    [[nodiscard]] const std::vector<Segment>& segments() const { return segments_; }

    /// Index of the segment containing r (clamped to the covered range).
    [[nodiscard]] std::size_t locate(double r) const;
    [[nodiscard]] Value operator()(double r) const;

private:
    std::vector<Segment> segments_;
};

}  // namespace plap
