#pragma once

#include <stdexcept>
#include <string>

namespace pcblint {

// Base class for all pcblint errors. The CLI maps any Error to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input is not well-formed XML.
class MalformedXml : public Error {
public:
    MalformedXml(const std::string& msg, int line, int column)
        : Error("malformed XML at line " + std::to_string(line) + ", column "
                + std::to_string(column) + ": " + msg),
          line(line), column(column) {}
    int line;
    int column;
};

class NotASchematic : public Error {
public:
    explicit NotASchematic(const std::string& msg) : Error(msg) {}
};

class NotABoard : public Error {
public:
    explicit NotABoard(const std::string& msg) : Error(msg) {}
};

class NotALibrary : public Error {
public:
    explicit NotALibrary(const std::string& msg) : Error(msg) {}
};

// A cross-reference inside a design file does not resolve. The message names
// the dangling reference (e.g. "U9" or "R1:3").
class BrokenReference : public Error {
public:
    BrokenReference(const std::string& reference, const std::string& detail)
        : Error("broken reference \"" + reference + "\": " + detail),
          reference(reference) {}
    std::string reference;
};

// A query navigation or filter step was applied to a selection kind that does
// not support it.
class KindMismatch : public Error {
public:
    explicit KindMismatch(const std::string& msg) : Error(msg) {}
};

class PatternSyntax : public Error {
public:
    PatternSyntax(const std::string& msg, size_t position)
        : Error("pattern syntax error at offset " + std::to_string(position) + ": " + msg),
          position(position) {}
    size_t position;
};

class PatternShape : public Error {
public:
    explicit PatternShape(const std::string& msg) : Error(msg) {}
};

// net_of() was asked about a (part, gate, pin) triple that is not part of the
// drawn design.
class UnknownPin : public Error {
public:
    explicit UnknownPin(const std::string& msg) : Error(msg) {}
};

class UnknownLab : public Error {
public:
    explicit UnknownLab(const std::string& lab)
        : Error("unknown lab \"" + lab + "\" in rule-set configuration") {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

class WaiverSyntax : public Error {
public:
    WaiverSyntax(const std::string& msg, int line)
        : Error("waiver file line " + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

class DuplicateWaiver : public Error {
public:
    explicit DuplicateWaiver(const std::string& msg) : Error(msg) {}
};

class NoSuchWaiver : public Error {
public:
    explicit NoSuchWaiver(const std::string& msg) : Error(msg) {}
};

class AlreadyDecided : public Error {
public:
    explicit AlreadyDecided(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace pcblint
