#include "zakai/table_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "zakai/text_io.hpp"

namespace zakai {

namespace {

void write_binary_matrix(std::ostream& out, const Matrix& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      std::uint64_t bits = std::bit_cast<std::uint64_t>(m(i, j));
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      char bytes[8];
      std::memcpy(bytes, &bits, 8);
      out.write(bytes, 8);
    }
}

void write_text_matrix(std::ostream& out, const Matrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_real(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix(std::ostream& out, const Matrix& m, TableEncoding encoding) {
  if (encoding == TableEncoding::Binary)
    write_binary_matrix(out, m);
  else
    write_text_matrix(out, m);
}

Matrix read_matrix(std::istream& in, int K, TableEncoding encoding, const std::string& what) {
  Matrix m(K, K);
  if (encoding == TableEncoding::Binary) {
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) {
        char bytes[8];
        if (!in.read(bytes, 8)) throw ValidationError("table: truncated binary block " + what);
        std::uint64_t bits;
        std::memcpy(&bits, bytes, 8);
        if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
        m(i, j) = std::bit_cast<double>(bits);
      }
    return m;
  }
  std::string line;
  for (int i = 0; i < K; ++i) {
    if (!std::getline(in, line)) throw ValidationError("table: truncated block " + what);
    const auto tokens = split_whitespace(line);
    if (static_cast<int>(tokens.size()) != K)
      throw ValidationError("table: row " + std::to_string(i + 1) + " of " + what + " has " +
                            std::to_string(tokens.size()) + " entries, expected " + std::to_string(K));
    for (int j = 0; j < K; ++j) m(i, j) = parse_real(tokens[j], "table entry");
  }
  return m;
}

std::string join_gammas(const std::vector<std::vector<int>>& gammas) {
  std::string out;
  for (const auto& g : gammas) {
    if (!out.empty()) out += ' ';
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (j) out += ',';
      out += std::to_string(g[j]);
    }
  }
  return out;
}

std::vector<std::vector<int>> parse_gammas(const std::string& text, int d) {
  std::vector<std::vector<int>> gammas;
  for (const auto& token : split_whitespace(text)) {
    std::vector<int> g;
    std::stringstream ss(token);
    std::string part;
    while (std::getline(ss, part, ',')) g.push_back(static_cast<int>(parse_integer(part, "gamma")));
    if (static_cast<int>(g.size()) != d) throw ValidationError("table: gamma tuple of wrong dimension");
    gammas.push_back(std::move(g));
  }
  return gammas;
}

std::string expect_line(std::istream& in, const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("table: missing " + what);
  return line;
}

}  // namespace

void write_table(std::ostream& out, const PropagatorTable& table, TableEncoding encoding) {
  out << "version=1\n";
  out << "K=" << table.K << '\n';
  out << "r=" << table.r << '\n';
  out << "delta=" << format_real(table.delta) << '\n';
  out << "N=" << table.N << '\n';
  out << "n=" << table.n << '\n';
  out << "substeps=" << table.substeps << '\n';
  out << "d=" << table.d << '\n';
  out << "gammas=" << join_gammas(table.gammas) << '\n';
  out << "lambdas=";
  for (std::size_t i = 0; i < table.lambdas.size(); ++i) out << (i ? " " : "") << format_real(table.lambdas[i]);
  out << '\n';
  out << "count=" << table.indices.size() << '\n';
  out << "encoding=" << (encoding == TableEncoding::Binary ? "binary" : "text") << '\n';
  out << "matrix A\n";
  write_matrix(out, table.A, encoding);
  for (std::size_t l = 0; l < table.B.size(); ++l) {
    out << "matrix B" << l + 1 << '\n';
    write_matrix(out, table.B[l], encoding);
  }
  for (std::size_t a = 0; a < table.indices.size(); ++a) {
    out << "alpha " << serialize(table.indices[a]) << '\n';
    write_matrix(out, table.coefficients[a], encoding);
  }
  out << "end\n";
}

PropagatorTable read_table(std::istream& in) {
  std::map<std::string, std::string> header;
  std::string line;
  while (true) {
    line = expect_line(in, "encoding header line");
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("table: malformed header line '" + line + "'");
    const std::string key(trim(std::string_view(line).substr(0, eq)));
    header[key] = std::string(trim(std::string_view(line).substr(eq + 1)));
    if (key == "encoding") break;
  }
  auto get = [&](const char* key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) throw ValidationError(std::string("table: header lacks ") + key + "=");
    return it->second;
  };
  if (get("version") != "1") throw ValidationError("table: unsupported version " + get("version"));
  const std::string& enc = get("encoding");
  if (enc != "text" && enc != "binary") throw ValidationError("table: unknown encoding " + enc);
  const TableEncoding encoding = enc == "binary" ? TableEncoding::Binary : TableEncoding::Text;

  PropagatorTable table;
  table.K = static_cast<int>(parse_integer(get("K"), "K"));
  table.r = static_cast<int>(parse_integer(get("r"), "r"));
  table.delta = parse_real(get("delta"), "delta");
  table.N = static_cast<int>(parse_integer(get("N"), "N"));
  table.n = static_cast<int>(parse_integer(get("n"), "n"));
  table.substeps = static_cast<int>(parse_integer(get("substeps"), "substeps"));
  table.d = static_cast<int>(parse_integer(get("d"), "d"));
  if (table.K < 1 || table.r < 1 || table.N < 0 || table.n < 1 || table.d < 1 || !(table.delta > 0.0))
    throw ValidationError("table: header values out of range");
  table.gammas = parse_gammas(get("gammas"), table.d);
  for (const auto& t : split_whitespace(get("lambdas"))) table.lambdas.push_back(parse_real(t, "lambda"));
  const auto count = parse_integer(get("count"), "count");

  if (expect_line(in, "matrix A") != "matrix A") throw ValidationError("table: expected 'matrix A'");
  table.A = read_matrix(in, table.K, encoding, "A");
  for (int l = 1; l <= table.r; ++l) {
    const std::string tag = "matrix B" + std::to_string(l);
    if (expect_line(in, tag) != tag) throw ValidationError("table: expected '" + tag + "'");
    table.B.push_back(read_matrix(in, table.K, encoding, "B" + std::to_string(l)));
  }
  for (long long a = 0; a < count; ++a) {
    line = expect_line(in, "alpha block");
    if (line.rfind("alpha ", 0) != 0) throw ValidationError("table: expected 'alpha' block, got '" + line + "'");
    table.indices.push_back(parse_multiindex(std::string_view(line).substr(6), table.r));
    table.coefficients.push_back(read_matrix(in, table.K, encoding, "alpha " + line.substr(6)));
  }
  if (expect_line(in, "end marker") != "end") throw ValidationError("table: missing end marker");

  if (table.indices != enumerate_truncated(table.N, table.n, table.r))
    throw ValidationError("table: index list does not match the truncated set for N, n, r");
  return table;
}

void save_table(const std::filesystem::path& path, const PropagatorTable& table, TableEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_table(out, table, encoding);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

PropagatorTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open table file " + path.string());
  return read_table(in);
}

}  // namespace zakai
