#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sahs::edf {

// EDF container: 256-byte fixed header, then 256 bytes of ASCII fields per
// signal (field-major), then data records of 16-bit little-endian samples,
// signals stored contiguously per record in header order.

struct EdfError : std::runtime_error {
    enum class Kind {
        TruncatedHeader,
        NonAsciiField,
        InconsistentHeaderBytes,
        InvalidNumeric,
        ChannelNotFound,
        AmbiguousChannel,
        TruncatedDataRecord,
        ValueOutOfPhysicalRange,
        IoFailure,
    };
    Kind kind;
    EdfError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct EdfDateTime {
    int year = 2000;
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    int second = 0;
};

struct EdfSignalHeader {
    std::string label;
    std::string transducer;
    std::string physical_dimension;
    double physical_min = -1.0;
    double physical_max = 1.0;
    int digital_min = -32768;
    int digital_max = 32767;
    std::string prefiltering;
    int samples_per_record = 1;
};

struct EdfHeader {
    std::string version;       // "0" for EDF
    std::string patient_id;
    std::string recording_id;
    EdfDateTime start;
    int header_bytes = 0;      // 256 * (num_signals + 1)
    int num_data_records = -1; // -1 resolved from file size when data present
    double record_duration_s = 1.0;
    int num_signals = 0;
    std::vector<EdfSignalHeader> signals;
};

struct SignalRecord {
    std::string label;
    double sampling_rate_hz = 0.0;
    std::string physical_dimension;
    std::vector<double> samples;
};

// Parses the header section of `bytes` (typically a whole file). A declared
// num_data_records of -1 is resolved as floor(data_bytes / bytes_per_record)
// when the span extends past the header.
EdfHeader parse_header(std::span<const char> bytes);

EdfHeader read_header(const std::string& path);

// Exact match on the trimmed label. The case-insensitive variant is a
// convenience for CLI use; the library core stays case-sensitive.
int find_channel(const EdfHeader& h, const std::string& label);
int find_channel_ci(const EdfHeader& h, const std::string& label);

// Decodes one channel to physical units:
//   p = physical_min + (d - digital_min) * (physical_max - physical_min)
//                                        / (digital_max - digital_min)
SignalRecord read_signal(const std::string& path, const std::string& channel_label);
SignalRecord decode_signal(std::span<const char> bytes, const EdfHeader& h, int signal_index);

// Writes header and signals; digital values round to nearest. Each
// signals[i] must hold num_data_records * samples_per_record samples within
// [physical_min, physical_max] of signal i.
void write_edf(const EdfHeader& h, const std::vector<std::vector<double>>& signals,
               const std::string& path);

double quantization_step(const EdfSignalHeader& s);

}  // namespace sahs::edf
