#include "sahs/annotations.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace sahs::annotations {

namespace {

using Kind = AnnotationError::Kind;

[[noreturn]] void malformed(const std::string& msg) {
    throw AnnotationError(Kind::MalformedXml, msg);
}

struct XmlCursor {
    std::string_view s;
    std::size_t pos = 0;

    bool done() const { return pos >= s.size(); }
    char peek() const { return s[pos]; }
    bool starts_with(std::string_view prefix) const { return s.substr(pos, prefix.size()) == prefix; }

    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    void expect(char c) {
        if (done() || s[pos] != c)
            malformed(std::string("expected '") + c + "' at offset " + std::to_string(pos));
        ++pos;
    }

    // skip past `end`, error when missing
    void skip_until(std::string_view end, const char* what) {
        std::size_t at = s.find(end, pos);
        if (at == std::string_view::npos) malformed(std::string("unterminated ") + what);
        pos = at + end.size();
    }
};

bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
           c == ':';
}

std::string read_name(XmlCursor& c) {
    std::size_t b = c.pos;
    while (!c.done() && name_char(c.peek())) ++c.pos;
    if (c.pos == b) malformed("expected a name at offset " + std::to_string(b));
    return std::string(c.s.substr(b, c.pos - b));
}

void append_decoded(std::string& out, std::string_view raw) {
    for (std::size_t i = 0; i < raw.size();) {
        if (raw[i] != '&') {
            out += raw[i++];
            continue;
        }
        std::size_t semi = raw.find(';', i);
        if (semi == std::string_view::npos) malformed("unterminated entity reference");
        std::string_view ent = raw.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else if (ent.size() >= 2 && ent[0] == '#') {
            const bool hex = ent[1] == 'x';
            long code = std::strtol(std::string(ent.substr(hex ? 2 : 1)).c_str(), nullptr,
                                    hex ? 16 : 10);
            if (code <= 0 || code > 0x7f) malformed("unsupported character reference &" +
                                                    std::string(ent) + ";");
            out += static_cast<char>(code);
        } else {
            malformed("unknown entity &" + std::string(ent) + ";");
        }
        i = semi + 1;
    }
}

// skips comments, PIs and DOCTYPE; returns false at EOF
bool skip_misc(XmlCursor& c) {
    for (;;) {
        c.skip_ws();
        if (c.done()) return false;
        if (c.starts_with("<!--")) {
            c.pos += 4;
            c.skip_until("-->", "comment");
        } else if (c.starts_with("<?")) {
            c.pos += 2;
            c.skip_until("?>", "processing instruction");
        } else if (c.starts_with("<!DOCTYPE")) {
            c.skip_until(">", "DOCTYPE");
        } else {
            return true;
        }
    }
}

XmlNode parse_element(XmlCursor& c) {
    c.expect('<');
    XmlNode node;
    node.name = read_name(c);

    // attributes
    for (;;) {
        c.skip_ws();
        if (c.done()) malformed("tag '" + node.name + "' never closes");
        if (c.peek() == '/' || c.peek() == '>') break;
        std::string attr = read_name(c);
        c.skip_ws();
        c.expect('=');
        c.skip_ws();
        if (c.done() || (c.peek() != '"' && c.peek() != '\''))
            malformed("attribute '" + attr + "' value is not quoted");
        char quote = c.peek();
        ++c.pos;
        std::size_t b = c.pos;
        while (!c.done() && c.peek() != quote) ++c.pos;
        if (c.done()) malformed("unterminated attribute value for '" + attr + "'");
        std::string value;
        append_decoded(value, c.s.substr(b, c.pos - b));
        ++c.pos;
        node.attributes.emplace_back(std::move(attr), std::move(value));
    }

    if (c.peek() == '/') {
        ++c.pos;
        c.expect('>');
        return node;
    }
    c.expect('>');

    // content: children and character data until </name>
    for (;;) {
        if (c.done()) malformed("element '" + node.name + "' is never closed");
        if (c.peek() == '<') {
            if (c.starts_with("</")) {
                c.pos += 2;
                std::string closing = read_name(c);
                if (closing != node.name)
                    malformed("mismatched closing tag </" + closing + "> for <" + node.name + ">");
                c.skip_ws();
                c.expect('>');
                return node;
            }
            if (c.starts_with("<!--")) {
                c.pos += 4;
                c.skip_until("-->", "comment");
                continue;
            }
            if (c.starts_with("<![CDATA[")) {
                c.pos += 9;
                std::size_t at = c.s.find("]]>", c.pos);
                if (at == std::string_view::npos) malformed("unterminated CDATA section");
                node.text.append(c.s.substr(c.pos, at - c.pos));
                c.pos = at + 3;
                continue;
            }
            if (c.starts_with("<?")) {
                c.pos += 2;
                c.skip_until("?>", "processing instruction");
                continue;
            }
            node.children.push_back(parse_element(c));
        } else {
            std::size_t b = c.pos;
            while (!c.done() && c.peek() != '<') ++c.pos;
            append_decoded(node.text, c.s.substr(b, c.pos - b));
        }
    }
}

}  // namespace

const XmlNode* XmlNode::child(std::string_view childname) const {
    for (const auto& ch : children)
        if (ch.name == childname) return &ch;
    return nullptr;
}

const std::string* XmlNode::attribute(std::string_view attrname) const {
    for (const auto& [k, v] : attributes)
        if (k == attrname) return &v;
    return nullptr;
}

XmlNode parse_xml(std::string_view text) {
    XmlCursor c{text};
    if (!skip_misc(c)) malformed("document has no root element");
    if (c.peek() != '<') malformed("text before the root element");
    XmlNode root = parse_element(c);
    if (skip_misc(c)) malformed("content after the root element");
    return root;
}

EventClass classify_event_name(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower.find("hypopnea") != std::string::npos) return EventClass::Hypopnea;
    if (lower.find("apnea") != std::string::npos) return EventClass::Apnea;
    return EventClass::Other;
}

namespace {

std::string trimmed(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// a field can come from a child element (preferred) or an attribute
const std::string* event_field(const XmlNode& ev, std::string_view name, std::string& storage) {
    if (const XmlNode* ch = ev.child(name)) {
        storage = trimmed(ch->text);
        return &storage;
    }
    if (const std::string* attr = ev.attribute(name)) {
        storage = trimmed(*attr);
        return &storage;
    }
    return nullptr;
}

double event_number(const std::string& text, const std::string& what) {
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size())
        throw AnnotationError(Kind::BadNumeric, "bad " + what + " value '" + text + "'");
    return v;
}

void collect_events(const XmlNode& node, AnnotationParse& out) {
    if (node.name == "ScoredEvent") {
        ++out.total_scored;
        std::string name_s, start_s, dur_s;
        const std::string* name = event_field(node, "Name", name_s);
        if (!name) throw AnnotationError(Kind::MissingField, "ScoredEvent without a Name");
        const EventClass cls = classify_event_name(*name);
        if (cls == EventClass::Other) {
            ++out.skipped;
            return;
        }
        const std::string* start = event_field(node, "Start", start_s);
        const std::string* dur = event_field(node, "Duration", dur_s);
        if (!start)
            throw AnnotationError(Kind::MissingField, "event '" + *name + "' lacks a Start");
        if (!dur)
            throw AnnotationError(Kind::MissingField, "event '" + *name + "' lacks a Duration");
        ScoredEvent ev;
        ev.raw_name = *name;
        ev.kind = cls == EventClass::Hypopnea ? EventKind::Hypopnea : EventKind::Apnea;
        ev.start_s = event_number(*start, "Start");
        ev.duration_s = event_number(*dur, "Duration");
        if (ev.duration_s <= 0.0)
            throw AnnotationError(Kind::NegativeDuration, "event '" + *name +
                                                              "' has non-positive duration " +
                                                              *dur);
        if (ev.start_s < 0.0)
            throw AnnotationError(Kind::NegativeStart,
                                  "event '" + *name + "' has negative start " + *start);
        out.events.push_back(std::move(ev));
        return;
    }
    for (const XmlNode& ch : node.children) collect_events(ch, out);
}

}  // namespace

AnnotationParse parse_annotations(std::string_view xml_text) {
    XmlNode root = parse_xml(xml_text);
    AnnotationParse out;
    collect_events(root, out);
    std::stable_sort(out.events.begin(), out.events.end(),
                     [](const ScoredEvent& a, const ScoredEvent& b) { return a.start_s < b.start_s; });
    return out;
}

}  // namespace sahs::annotations
