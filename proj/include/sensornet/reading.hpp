#ifndef SENSORNET_READING_HPP
#define SENSORNET_READING_HPP

#include <stdexcept>
#include <variant>

#include "sensornet/interval.hpp"

namespace sensornet {

/// A binary sensor output, 0 or 1.
struct Bit {
    int value = 0;

    Bit() = default;

    explicit Bit(int v) : value(v) {
        if (v != 0 && v != 1) {
            throw std::invalid_argument("bit must be 0 or 1");
        }
    }

    friend bool operator==(Bit, Bit) = default;
};

/// What a sensor reported: a crisp value, an interval, or a bit.
using Payload = std::variant<double, Interval, Bit>;

/// One sensor observation. Exactly one payload alternative is held.
struct Reading {
    int sensor_id = 0;
    Payload payload = 0.0;

    static Reading crisp(int id, double value) { return {id, value}; }
    static Reading interval(int id, double lo, double hi) { return {id, Interval(lo, hi)}; }
    static Reading interval(int id, const Interval& iv) { return {id, iv}; }
    static Reading bit(int id, int b) { return {id, Bit(b)}; }

    bool is_crisp() const { return std::holds_alternative<double>(payload); }
    bool is_interval() const { return std::holds_alternative<Interval>(payload); }
    bool is_bit() const { return std::holds_alternative<Bit>(payload); }

    double crisp_value() const { return std::get<double>(payload); }
    const Interval& interval_value() const { return std::get<Interval>(payload); }
    int bit_value() const { return std::get<Bit>(payload).value; }
};

}  // namespace sensornet

#endif
