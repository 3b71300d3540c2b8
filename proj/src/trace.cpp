#include "shadowtouch/trace.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "shadowtouch/errors.hpp"

namespace shadowtouch {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
    throw DataError("trace line " + std::to_string(line_no) + ": " + what);
}

} // namespace

void write_trace(std::ostream& out, const TraceFile& trace) {
    out << "# shadowtouch-trace v1\n";
    out << "# label=" << trace.label << "\n";
    out << "# frame_period_ms=" << fmt(trace.frame_period_ms) << "\n";
    for (const auto& rec : trace.records) {
        bool first = true;
        for (const auto& f : rec.fingers) {
            if (!first) out << ' ';
            first = false;
            out << fmt(rec.t_ms) << ' ' << f.finger_id << ' ' << fmt(f.tip.x) << ' '
                << fmt(f.tip.y) << ' ' << fmt(f.tip.z) << ' ' << (f.contact ? 1 : 0);
        }
        out << '\n';
    }
}

TraceFile read_trace(std::istream& in) {
    TraceFile trace;
    trace.label.clear();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::string key = line.substr(1, eq - 1);
                key.erase(0, key.find_first_not_of(" \t"));
                key.erase(key.find_last_not_of(" \t") + 1);
                const std::string value = line.substr(eq + 1);
                if (key == "label") trace.label = value;
                else if (key == "frame_period_ms") {
                    try {
                        trace.frame_period_ms = std::stod(value);
                    } catch (const std::exception&) {
                        fail(line_no, "bad frame_period_ms value '" + value + "'");
                    }
                }
            }
            continue;
        }
        std::istringstream row(line);
        HandTraceRecord rec;
        double t_ms = 0.0;
        while (true) {
            double t = 0.0;
            if (!(row >> t)) {
                if (rec.fingers.empty()) fail(line_no, "expected at least one finger group");
                break;
            }
            FingerSample f;
            int contact = 0;
            if (!(row >> f.finger_id >> f.tip.x >> f.tip.y >> f.tip.z >> contact))
                fail(line_no, "truncated finger group");
            if (contact != 0 && contact != 1) fail(line_no, "contact flag must be 0 or 1");
            if (f.finger_id < 0 || f.finger_id >= kMaxFingers)
                fail(line_no, "finger id " + std::to_string(f.finger_id) + " out of range");
            f.contact = contact == 1;
            if (rec.fingers.empty()) {
                t_ms = t;
            } else if (std::abs(t - t_ms) > 1e-6) {
                fail(line_no, "inconsistent t_ms across finger groups");
            }
            for (const auto& prev : rec.fingers)
                if (prev.finger_id == f.finger_id)
                    fail(line_no, "duplicate finger id " + std::to_string(f.finger_id));
            rec.fingers.push_back(f);
        }
        rec.t_ms = t_ms;
        if (!trace.records.empty() && rec.t_ms <= trace.records.back().t_ms)
            fail(line_no, "timestamps must be strictly increasing");
        trace.records.push_back(std::move(rec));
    }
    if (trace.label.empty()) trace.label = "trace";
    return trace;
}

} // namespace shadowtouch
