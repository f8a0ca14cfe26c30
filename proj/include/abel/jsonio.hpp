#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace abel {

/// Minimal JSON emitter with byte-stable output: insertion-ordered keys
/// (callers insert sorted), 2-space indent, %.17g numbers, LF endings.
class JsonWriter {
public:
    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    void key(const std::string& name) {
        comma();
        indent();
        out_ += '"';
        escape(name);
        out_ += "\": ";
        pending_value_ = true;
    }

    void value(double v) {
        lead();
        if (!std::isfinite(v)) {
            out_ += "null";
        } else {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out_ += buf;
        }
    }
    void value(int v) { value_raw(std::to_string(v)); }
    void value(long long v) { value_raw(std::to_string(v)); }
    void value(bool v) { value_raw(v ? "true" : "false"); }
    void value(const std::string& v) {
        lead();
        out_ += '"';
        escape(v);
        out_ += '"';
    }
    void value(const char* v) { value(std::string(v)); }
    void null() { value_raw("null"); }

    std::string take() {
        out_ += '\n';
        return std::move(out_);
    }

private:
    void value_raw(const std::string& text) {
        lead();
        out_ += text;
    }
    void open(char c) {
        lead();
        out_ += c;
        stack_.push_back(false);
    }
    void close(char c) {
        const bool had = stack_.back();
        stack_.pop_back();
        if (had) {
            out_ += '\n';
            indent();
        }
        out_ += c;
    }
    void lead() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        comma();
        indent();
    }
    void comma() {
        if (!stack_.empty()) {
            if (stack_.back()) out_ += ',';
            out_ += '\n';
            stack_.back() = true;
        }
    }
    void indent() { out_.append(2 * stack_.size(), ' '); }
    void escape(const std::string& s) {
        for (char c : s) {
            if (c == '"' || c == '\\') out_ += '\\';
            out_ += c;
        }
    }

    std::string out_;
    std::vector<bool> stack_;
    bool pending_value_ = false;
};

}  // namespace abel
