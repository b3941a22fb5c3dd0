#include "cnfepi/io.hpp"

#include <sstream>
#include <system_error>
#include <unistd.h>

#include "cnfepi/error.hpp"

namespace cnfepi {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DuplicateConcept: return "DuplicateConcept";
    case ErrorCode::DuplicateWord: return "DuplicateWord";
    case ErrorCode::EmptyOntology: return "EmptyOntology";
    case ErrorCode::NameCollision: return "NameCollision";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WrongLossKind: return "WrongLossKind";
    case ErrorCode::FingerprintMismatch: return "FingerprintMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::TooFewDatasets: return "TooFewDatasets";
    case ErrorCode::NoPositives: return "NoPositives";
    case ErrorCode::UnlabeledData: return "UnlabeledData";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::MissingText: return "MissingText";
    case ErrorCode::BadLabel: return "BadLabel";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ModelFormat: return "ModelFormat";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io:
    case ErrorCode::ModelFormat:
    case ErrorCode::UnknownSymbol:
      return false;
    default:
      return true;
  }
}

namespace io {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return in;
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error(ErrorCode::Io, "write failed for " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename into " + path.string());
  }
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ModelFormat, "bad number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      break;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view ws = " \t\r\n\f\v";
  auto b = text.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = text.find_last_not_of(ws);
  return text.substr(b, e - b + 1);
}

}  // namespace io
}  // namespace cnfepi
