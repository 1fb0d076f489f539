#ifndef READRANK_ERRORS_HPP
#define READRANK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace readrank {

// Common base so the CLI can map any toolkit failure to one exit code.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

class EmptyArticle : public Error {
public:
  explicit EmptyArticle(const std::string& path)
      : Error("article file has no sentences: " + path) {}
};

class InvalidLevels : public Error {
public:
  explicit InvalidLevels(const std::string& msg) : Error(msg) {}
};

// Malformed row in a TSV/CSV data file; line numbers are 1-based.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class TreeParseError : public Error {
public:
  TreeParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " (offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

private:
  std::size_t offset_;
};

class LexiconParseError : public Error {
public:
  LexiconParseError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class FormatError : public Error {
public:
  explicit FormatError(const std::string& msg) : Error(msg) {}
};

class MissingParse : public Error {
public:
  explicit MissingParse(const std::string& msg) : Error(msg) {}
};

class RegistryError : public Error {
public:
  explicit RegistryError(const std::string& msg) : Error(msg) {}
};

class FKUndefined : public Error {
public:
  FKUndefined() : Error("Flesch-Kincaid grade is undefined for an empty sentence") {}
};

class NoTrainingPairs : public Error {
public:
  NoTrainingPairs() : Error("no training pairs could be generated") {}
};

class SchemaError : public Error {
public:
  explicit SchemaError(const std::string& msg) : Error(msg) {}
};

class ModelFormatError : public Error {
public:
  explicit ModelFormatError(const std::string& msg) : Error(msg) {}
};

class EmptyTestSet : public Error {
public:
  EmptyTestSet() : Error("test set contains no rankable pairs") {}
};

class TooFewGroups : public Error {
public:
  TooFewGroups(std::size_t groups, int k)
      : Error("cannot make " + std::to_string(k) + " folds from " +
              std::to_string(groups) + " groups") {}
};

class SizeTooLarge : public Error {
public:
  SizeTooLarge(std::size_t requested, std::size_t available)
      : Error("requested training size " + std::to_string(requested) +
              " exceeds corpus size " + std::to_string(available)) {}
};

}  // namespace readrank

#endif  // READRANK_ERRORS_HPP
