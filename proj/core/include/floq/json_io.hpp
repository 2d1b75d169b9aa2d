#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace floq {

/// %.17g rendering; round-trips doubles exactly and keeps emitted files
/// byte-deterministic
inline std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// Deterministic JSON emitter: insertion-ordered keys, finite doubles at 17
/// significant digits, infinities as the strings "inf" / "-inf".
class JsonWriter {
public:
    JsonWriter& begin_object() {
        comma();
        out_ += '{';
        stack_.push_back(false);
        return *this;
    }
    JsonWriter& end_object() {
        out_ += '}';
        stack_.pop_back();
        mark();
        return *this;
    }
    JsonWriter& begin_array() {
        comma();
        out_ += '[';
        stack_.push_back(false);
        return *this;
    }
    JsonWriter& end_array() {
        out_ += ']';
        stack_.pop_back();
        mark();
        return *this;
    }
    JsonWriter& key(const std::string& k) {
        comma();
        append_string(k);
        out_ += ':';
        pending_value_ = true;
        return *this;
    }
    JsonWriter& value(double x) {
        comma();
        if (std::isinf(x))
            append_string(x > 0 ? "inf" : "-inf");
        else if (std::isnan(x))
            append_string("nan");
        else
            out_ += g17(x);
        mark();
        return *this;
    }
    JsonWriter& value(int x) { return value_integral(std::to_string(x)); }
    JsonWriter& value(std::uint64_t x) { return value_integral(std::to_string(x)); }
    JsonWriter& value(bool x) { return value_integral(x ? "true" : "false"); }
    JsonWriter& value(const std::string& s) {
        comma();
        append_string(s);
        mark();
        return *this;
    }
    JsonWriter& value(const char* s) { return value(std::string(s)); }

    const std::string& str() const { return out_; }

private:
    JsonWriter& value_integral(const std::string& text) {
        comma();
        out_ += text;
        mark();
        return *this;
    }
    void comma() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!stack_.empty() && stack_.back()) out_ += ',';
    }
    void mark() {
        if (!stack_.empty()) stack_.back() = true;
    }
    void append_string(const std::string& s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                case '\r': out_ += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else {
                        out_ += c;
                    }
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> stack_;
    bool pending_value_ = false;
};

} // namespace floq
