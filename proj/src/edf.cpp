#include "sahs/edf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

namespace sahs::edf {

namespace {

using Kind = EdfError::Kind;

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(' ');
    if (b == std::string_view::npos) return "";
    std::size_t e = s.find_last_not_of(' ');
    return std::string(s.substr(b, e - b + 1));
}

// Sequential reader over the ASCII header fields.
struct FieldReader {
    std::span<const char> bytes;
    std::size_t pos = 0;

    std::string_view raw(std::size_t len, const char* what) {
        if (pos + len > bytes.size())
            throw EdfError(Kind::TruncatedHeader,
                           std::string("header ends inside field '") + what + "'");
        std::string_view v(bytes.data() + pos, len);
        pos += len;
        return v;
    }

    std::string text(std::size_t len, const char* what) {
        std::string_view v = raw(len, what);
        for (char c : v) {
            if (c < 0x20 || c > 0x7e)
                throw EdfError(Kind::NonAsciiField,
                               std::string("non-printable byte in field '") + what + "'");
        }
        return trim(v);
    }

    long integer(std::size_t len, const char* what) {
        std::string t = text(len, what);
        if (t.empty())
            throw EdfError(Kind::InvalidNumeric, std::string("empty numeric field '") + what + "'");
        char* end = nullptr;
        long v = std::strtol(t.c_str(), &end, 10);
        if (end != t.c_str() + t.size())
            throw EdfError(Kind::InvalidNumeric,
                           std::string("bad integer '") + t + "' in field '" + what + "'");
        return v;
    }

    double real(std::size_t len, const char* what) {
        std::string t = text(len, what);
        if (t.empty())
            throw EdfError(Kind::InvalidNumeric, std::string("empty numeric field '") + what + "'");
        char* end = nullptr;
        double v = std::strtod(t.c_str(), &end);
        if (end != t.c_str() + t.size() || !std::isfinite(v))
            throw EdfError(Kind::InvalidNumeric,
                           std::string("bad number '") + t + "' in field '" + what + "'");
        return v;
    }
};

// "dd.mm.yy" / "hh.mm.ss"
void parse_date_time(const std::string& date, const std::string& time, EdfDateTime& out) {
    int d, mo, y, h, mi, s;
    if (std::sscanf(date.c_str(), "%2d.%2d.%2d", &d, &mo, &y) != 3)
        throw EdfError(Kind::InvalidNumeric, "bad start date '" + date + "'");
    if (std::sscanf(time.c_str(), "%2d.%2d.%2d", &h, &mi, &s) != 3)
        throw EdfError(Kind::InvalidNumeric, "bad start time '" + time + "'");
    out.day = d;
    out.month = mo;
    out.year = (y >= 85) ? 1900 + y : 2000 + y;  // EDF clipping-date convention
    out.hour = h;
    out.minute = mi;
    out.second = s;
}

std::size_t record_bytes(const EdfHeader& h) {
    std::size_t b = 0;
    for (const auto& s : h.signals) b += static_cast<std::size_t>(s.samples_per_record) * 2;
    return b;
}

void put_field(std::string& out, const std::string& value, std::size_t len, const char* what) {
    if (value.size() > len)
        throw EdfError(Kind::IoFailure, std::string("field '") + what + "' value '" + value +
                                            "' exceeds " + std::to_string(len) + " chars");
    out += value;
    out.append(len - value.size(), ' ');
}

std::string format_real(double v, std::size_t len, const char* what) {
    char buf[64];
    // shortest representation that still re-parses to the same double
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    std::string s(buf);
    if (s.size() > len)
        throw EdfError(Kind::IoFailure, std::string("numeric field '") + what + "' value " + s +
                                            " does not fit in " + std::to_string(len) + " chars");
    return s;
}

}  // namespace

EdfHeader parse_header(std::span<const char> bytes) {
    if (bytes.size() < 256)
        throw EdfError(Kind::TruncatedHeader, "input shorter than the 256-byte fixed header");

    FieldReader r{bytes};
    EdfHeader h;
    h.version = r.text(8, "version");
    h.patient_id = r.text(80, "patient_id");
    h.recording_id = r.text(80, "recording_id");
    const std::string date = r.text(8, "start_date");
    const std::string time = r.text(8, "start_time");
    parse_date_time(date, time, h.start);
    h.header_bytes = static_cast<int>(r.integer(8, "header_bytes"));
    r.text(44, "reserved");
    h.num_data_records = static_cast<int>(r.integer(8, "num_data_records"));
    h.record_duration_s = r.real(8, "record_duration");
    if (h.record_duration_s <= 0.0)
        throw EdfError(Kind::InvalidNumeric, "record duration must be positive");
    h.num_signals = static_cast<int>(r.integer(4, "num_signals"));
    if (h.num_signals <= 0)
        throw EdfError(Kind::InvalidNumeric, "number of signals must be positive");

    if (h.header_bytes != 256 * (h.num_signals + 1))
        throw EdfError(Kind::InconsistentHeaderBytes,
                       "declared header bytes " + std::to_string(h.header_bytes) + ", expected " +
                           std::to_string(256 * (h.num_signals + 1)));
    if (bytes.size() < static_cast<std::size_t>(h.header_bytes))
        throw EdfError(Kind::TruncatedHeader, "input shorter than declared header");

    const int ns = h.num_signals;
    h.signals.resize(ns);
    // signal fields are stored field-major: all labels, then all transducers, ...
    for (int i = 0; i < ns; ++i) h.signals[i].label = r.text(16, "label");
    for (int i = 0; i < ns; ++i) h.signals[i].transducer = r.text(80, "transducer");
    for (int i = 0; i < ns; ++i) h.signals[i].physical_dimension = r.text(8, "physical_dimension");
    for (int i = 0; i < ns; ++i) h.signals[i].physical_min = r.real(8, "physical_min");
    for (int i = 0; i < ns; ++i) h.signals[i].physical_max = r.real(8, "physical_max");
    for (int i = 0; i < ns; ++i)
        h.signals[i].digital_min = static_cast<int>(r.integer(8, "digital_min"));
    for (int i = 0; i < ns; ++i)
        h.signals[i].digital_max = static_cast<int>(r.integer(8, "digital_max"));
    for (int i = 0; i < ns; ++i) h.signals[i].prefiltering = r.text(80, "prefiltering");
    for (int i = 0; i < ns; ++i) {
        long spr = r.integer(8, "samples_per_record");
        if (spr <= 0) throw EdfError(Kind::InvalidNumeric, "samples_per_record must be positive");
        h.signals[i].samples_per_record = static_cast<int>(spr);
    }
    for (int i = 0; i < ns; ++i) r.text(32, "signal_reserved");

    for (const auto& s : h.signals) {
        if (s.digital_min >= s.digital_max)
            throw EdfError(Kind::InvalidNumeric, "digital_min must be below digital_max");
        if (s.physical_min == s.physical_max)
            throw EdfError(Kind::InvalidNumeric, "physical_min equals physical_max");
    }

    if (h.num_data_records < 0 && bytes.size() >= static_cast<std::size_t>(h.header_bytes)) {
        const std::size_t rb = record_bytes(h);
        h.num_data_records =
            rb == 0 ? 0 : static_cast<int>((bytes.size() - h.header_bytes) / rb);
    }
    return h;
}

EdfHeader read_header(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EdfError(Kind::IoFailure, "cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_header(std::span<const char>(bytes.data(), bytes.size()));
}

int find_channel(const EdfHeader& h, const std::string& label) {
    const std::string want = trim(label);
    int found = -1;
    for (int i = 0; i < h.num_signals; ++i) {
        if (h.signals[i].label == want) {
            if (found >= 0)
                throw EdfError(Kind::AmbiguousChannel, "label '" + want + "' matches > 1 signal");
            found = i;
        }
    }
    if (found < 0) throw EdfError(Kind::ChannelNotFound, "no signal labeled '" + want + "'");
    return found;
}

int find_channel_ci(const EdfHeader& h, const std::string& label) {
    auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    const std::string want = lower(trim(label));
    int found = -1;
    for (int i = 0; i < h.num_signals; ++i) {
        if (lower(h.signals[i].label) == want) {
            if (found >= 0)
                throw EdfError(Kind::AmbiguousChannel, "label '" + want + "' matches > 1 signal");
            found = i;
        }
    }
    if (found < 0) throw EdfError(Kind::ChannelNotFound, "no signal labeled '" + want + "'");
    return found;
}

SignalRecord decode_signal(std::span<const char> bytes, const EdfHeader& h, int signal_index) {
    const EdfSignalHeader& sh = h.signals.at(signal_index);
    const std::size_t rb = record_bytes(h);
    std::size_t offset_in_record = 0;
    for (int i = 0; i < signal_index; ++i)
        offset_in_record += static_cast<std::size_t>(h.signals[i].samples_per_record) * 2;

    const int nrec = h.num_data_records < 0 ? 0 : h.num_data_records;
    SignalRecord out;
    out.label = sh.label;
    out.physical_dimension = sh.physical_dimension;
    out.sampling_rate_hz = sh.samples_per_record / h.record_duration_s;
    out.samples.resize(static_cast<std::size_t>(nrec) * sh.samples_per_record);

    const double scale = (sh.physical_max - sh.physical_min) /
                         (static_cast<double>(sh.digital_max) - sh.digital_min);
    std::size_t w = 0;
    for (int rec = 0; rec < nrec; ++rec) {
        const std::size_t base = h.header_bytes + rec * rb + offset_in_record;
        const std::size_t need = base + static_cast<std::size_t>(sh.samples_per_record) * 2;
        if (need > bytes.size())
            throw EdfError(Kind::TruncatedDataRecord,
                           "file ends inside data record " + std::to_string(rec));
        for (int sidx = 0; sidx < sh.samples_per_record; ++sidx) {
            const unsigned char lo = static_cast<unsigned char>(bytes[base + 2 * sidx]);
            const unsigned char hi = static_cast<unsigned char>(bytes[base + 2 * sidx + 1]);
            const std::int16_t d = static_cast<std::int16_t>(lo | (hi << 8));
            out.samples[w++] = sh.physical_min + (d - sh.digital_min) * scale;
        }
    }
    return out;
}

SignalRecord read_signal(const std::string& path, const std::string& channel_label) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw EdfError(Kind::IoFailure, "cannot open '" + path + "'");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::span<const char> span(bytes.data(), bytes.size());
    EdfHeader h = parse_header(span);
    return decode_signal(span, h, find_channel(h, channel_label));
}

double quantization_step(const EdfSignalHeader& s) {
    return (s.physical_max - s.physical_min) /
           (static_cast<double>(s.digital_max) - s.digital_min);
}

void write_edf(const EdfHeader& h, const std::vector<std::vector<double>>& signals,
               const std::string& path) {
    if (static_cast<int>(signals.size()) != h.num_signals ||
        static_cast<int>(h.signals.size()) != h.num_signals)
        throw EdfError(Kind::IoFailure, "signal count does not match header");
    if (h.num_data_records < 0)
        throw EdfError(Kind::IoFailure, "cannot write a header with unresolved record count");
    for (int i = 0; i < h.num_signals; ++i) {
        const std::size_t expect =
            static_cast<std::size_t>(h.num_data_records) * h.signals[i].samples_per_record;
        if (signals[i].size() != expect)
            throw EdfError(Kind::IoFailure, "signal " + std::to_string(i) + " has " +
                                                std::to_string(signals[i].size()) +
                                                " samples, header implies " +
                                                std::to_string(expect));
    }

    std::string out;
    out.reserve(256 * (h.num_signals + 1));
    char buf[64];
    put_field(out, h.version.empty() ? "0" : h.version, 8, "version");
    put_field(out, h.patient_id, 80, "patient_id");
    put_field(out, h.recording_id, 80, "recording_id");
    std::snprintf(buf, sizeof buf, "%02d.%02d.%02d", h.start.day, h.start.month,
                  h.start.year % 100);
    put_field(out, buf, 8, "start_date");
    std::snprintf(buf, sizeof buf, "%02d.%02d.%02d", h.start.hour, h.start.minute,
                  h.start.second);
    put_field(out, buf, 8, "start_time");
    put_field(out, std::to_string(256 * (h.num_signals + 1)), 8, "header_bytes");
    put_field(out, "", 44, "reserved");
    put_field(out, std::to_string(h.num_data_records), 8, "num_data_records");
    put_field(out, format_real(h.record_duration_s, 8, "record_duration"), 8, "record_duration");
    put_field(out, std::to_string(h.num_signals), 4, "num_signals");

    for (const auto& s : h.signals) put_field(out, s.label, 16, "label");
    for (const auto& s : h.signals) put_field(out, s.transducer, 80, "transducer");
    for (const auto& s : h.signals) put_field(out, s.physical_dimension, 8, "physical_dimension");
    for (const auto& s : h.signals)
        put_field(out, format_real(s.physical_min, 8, "physical_min"), 8, "physical_min");
    for (const auto& s : h.signals)
        put_field(out, format_real(s.physical_max, 8, "physical_max"), 8, "physical_max");
    for (const auto& s : h.signals)
        put_field(out, std::to_string(s.digital_min), 8, "digital_min");
    for (const auto& s : h.signals)
        put_field(out, std::to_string(s.digital_max), 8, "digital_max");
    for (const auto& s : h.signals) put_field(out, s.prefiltering, 80, "prefiltering");
    for (const auto& s : h.signals)
        put_field(out, std::to_string(s.samples_per_record), 8, "samples_per_record");
    for (int i = 0; i < h.num_signals; ++i) put_field(out, "", 32, "signal_reserved");

    // data records: encode each signal's samples, interleaved per record
    const int nrec = h.num_data_records;
    std::string data;
    data.reserve(record_bytes(h) * nrec);
    for (int rec = 0; rec < nrec; ++rec) {
        for (int i = 0; i < h.num_signals; ++i) {
            const EdfSignalHeader& sh = h.signals[i];
            const double scale = (static_cast<double>(sh.digital_max) - sh.digital_min) /
                                 (sh.physical_max - sh.physical_min);
            const std::size_t base = static_cast<std::size_t>(rec) * sh.samples_per_record;
            for (int sidx = 0; sidx < sh.samples_per_record; ++sidx) {
                const double p = signals[i][base + sidx];
                const double lo = std::min(sh.physical_min, sh.physical_max);
                const double hi = std::max(sh.physical_min, sh.physical_max);
                if (p < lo || p > hi)
                    throw EdfError(Kind::ValueOutOfPhysicalRange,
                                   "sample " + std::to_string(p) + " outside [" +
                                       std::to_string(lo) + ", " + std::to_string(hi) +
                                       "] in signal " + std::to_string(i));
                long d = std::lround((p - sh.physical_min) * scale) + sh.digital_min;
                d = std::clamp(d, static_cast<long>(sh.digital_min),
                               static_cast<long>(sh.digital_max));
                const auto u = static_cast<std::uint16_t>(static_cast<std::int16_t>(d));
                data.push_back(static_cast<char>(u & 0xff));
                data.push_back(static_cast<char>((u >> 8) & 0xff));
            }
        }
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw EdfError(Kind::IoFailure, "cannot create '" + path + "'");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f) throw EdfError(Kind::IoFailure, "write failed for '" + path + "'");
}

}  // namespace sahs::edf
