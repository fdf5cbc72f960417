#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sahs::annotations {

struct AnnotationError : std::runtime_error {
    enum class Kind {
        MalformedXml,
        MissingField,
        NegativeDuration,
        NegativeStart,
        BadNumeric,
    };
    Kind kind;
    AnnotationError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

enum class EventKind { Apnea, Hypopnea };

struct ScoredEvent {
    EventKind kind;
    double start_s = 0.0;     // seconds from recording start
    double duration_s = 0.0;
    std::string raw_name;
};

enum class EventClass { Apnea, Hypopnea, Other };

// Case-insensitive: names containing "hypopnea" map to Hypopnea; otherwise
// names containing "apnea" (obstructive/central/mixed variants) map to
// Apnea; everything else is Other.
EventClass classify_event_name(std::string_view name);

struct AnnotationParse {
    std::vector<ScoredEvent> events;  // sorted by start_s, stable
    int skipped = 0;                  // scored events that are not apnea/hypopnea
    int total_scored = 0;             // all ScoredEvent elements seen
};

// Accepts ScoredEvent elements with Name/Start/Duration children; a
// tolerant fallback reads attributes of the same names. See
// docs/annotation-example.xml for the schema.
AnnotationParse parse_annotations(std::string_view xml_text);

// Minimal XML reader backing parse_annotations (elements, attributes,
// character data, the five predefined entities, numeric references,
// comments, PIs and CDATA). No DTD processing.
struct XmlNode {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<XmlNode> children;
    std::string text;

    const XmlNode* child(std::string_view childname) const;
    const std::string* attribute(std::string_view attrname) const;
};

XmlNode parse_xml(std::string_view text);

}  // namespace sahs::annotations
