#pragma once

#include <cmath>
#include <stdexcept>

namespace uavls {

struct Position {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// A transmitter-receiver pair with its derived horizontal, vertical and
/// slant distances. Heights must be non-negative.
class LinkGeometry {
public:
    LinkGeometry(Position tx, Position rx) : tx_(tx), rx_(rx) {
        if (tx.z < 0.0 || rx.z < 0.0) {
            throw std::invalid_argument("LinkGeometry: node heights must be >= 0");
        }
        const double dx = tx.x - rx.x;
        const double dy = tx.y - rx.y;
        horizontal_ = std::sqrt(dx * dx + dy * dy);
        vertical_ = std::abs(tx.z - rx.z);
        length_ = std::sqrt(horizontal_ * horizontal_ + vertical_ * vertical_);
    }

    /// Link with the receiver at the origin of the horizontal plane.
    static LinkGeometry from_distances(double horizontal, double tx_z, double rx_z) {
        if (horizontal < 0.0) {
            throw std::invalid_argument("LinkGeometry: horizontal distance must be >= 0");
        }
        return LinkGeometry({horizontal, 0.0, tx_z}, {0.0, 0.0, rx_z});
    }

    const Position& tx() const { return tx_; }
    const Position& rx() const { return rx_; }
    double horizontal_distance() const { return horizontal_; }
    double vertical_distance() const { return vertical_; }
    double length() const { return length_; }

private:
    Position tx_;
    Position rx_;
    double horizontal_;
    double vertical_;
    double length_;
};

}  // namespace uavls
