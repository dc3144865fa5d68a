#pragma once

#include <Eigen/Dense>
#include <cctype>
#include <complex>
#include <cstdlib>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shotvar/errors.hpp"

namespace shotvar::obs {

constexpr int kMaxQubits = 6; // desk-scale dense-matrix bound (2^6 = 64)

struct PauliTerm {
    double coeff = 0.0;
    std::string word; // over {I, X, Y, Z}, one letter per qubit
};

/// Weighted sum of Pauli strings, H = sum_i a_i P_i. Terms are normalized on
/// construction: same word length everywhere, duplicate words merged,
/// exact-zero coefficients dropped (unless the operator would become empty).
class PauliHamiltonian {
public:
    PauliHamiltonian() = default;

    explicit PauliHamiltonian(std::vector<PauliTerm> terms) { assign(std::move(terms)); }

    /// Text format: one `coefficient WORD` pair per line, `#` starts a
    /// comment, an optional `*` may separate the pair. Throws parse_error
    /// with line/column on malformed input.
    static PauliHamiltonian parse(std::string_view text) {
        std::vector<PauliTerm> terms;
        std::size_t line_no = 0;
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            ++line_no;
            if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
            std::size_t pos = line.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;

            const char* start = line.c_str() + pos;
            char* end = nullptr;
            double coeff = std::strtod(start, &end);
            if (end == start)
                throw parse_error("pauli parse: expected coefficient at line " +
                                  std::to_string(line_no) + ", column " + std::to_string(pos + 1));
            pos = static_cast<std::size_t>(end - line.c_str());
            pos = line.find_first_not_of(" \t", pos);
            if (pos != std::string::npos && line[pos] == '*')
                pos = line.find_first_not_of(" \t", pos + 1);
            if (pos == std::string::npos)
                throw parse_error("pauli parse: missing Pauli word at line " +
                                  std::to_string(line_no));
            std::string word;
            while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) {
                char ch = static_cast<char>(std::toupper(static_cast<unsigned char>(line[pos])));
                if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z')
                    throw parse_error("pauli parse: invalid Pauli letter '" +
                                      std::string(1, line[pos]) + "' at line " +
                                      std::to_string(line_no) + ", column " +
                                      std::to_string(pos + 1));
                word.push_back(ch);
                ++pos;
            }
            if (pos != std::string::npos && line.find_first_not_of(" \t\r", pos) != std::string::npos)
                throw parse_error("pauli parse: trailing tokens at line " + std::to_string(line_no));
            terms.push_back({coeff, std::move(word)});
        }
        if (terms.empty()) throw parse_error("pauli parse: no terms found");
        return PauliHamiltonian(std::move(terms));
    }

    std::string serialize() const {
        std::ostringstream out;
        out.precision(17);
        for (const auto& t : terms_) out << t.coeff << " " << t.word << "\n";
        return out.str();
    }

    const std::vector<PauliTerm>& terms() const { return terms_; }
    int n_qubits() const { return n_qubits_; }

    double identity_coefficient() const {
        for (const auto& t : terms_)
            if (is_identity(t.word)) return t.coeff;
        return 0.0;
    }

    /// Dense 2^n x 2^n matrix. Qubit q of the word maps to tensor slot q,
    /// i.e. bit (n-1-q) of the basis index.
    Eigen::MatrixXcd to_matrix() const {
        if (n_qubits_ > kMaxQubits)
            throw capacity_error("pauli to_matrix: " + std::to_string(n_qubits_) +
                                 " qubits exceeds the dense bound of " +
                                 std::to_string(kMaxQubits));
        const Eigen::Index dim = Eigen::Index(1) << n_qubits_;
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
        for (const auto& t : terms_) {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
            for (char ch : t.word) m = kron(m, pauli_matrix(ch));
            h += t.coeff * m;
        }
        return h;
    }

    static bool is_identity(std::string_view word) {
        return word.find_first_not_of('I') == std::string_view::npos;
    }

    static Eigen::Matrix2cd pauli_matrix(char ch) {
        using namespace std::complex_literals;
        Eigen::Matrix2cd m;
        switch (ch) {
            case 'I': m << 1, 0, 0, 1; break;
            case 'X': m << 0, 1, 1, 0; break;
            case 'Y': m << 0, -1i, 1i, 0; break;
            case 'Z': m << 1, 0, 0, -1; break;
            default: throw std::invalid_argument("unknown Pauli letter");
        }
        return m;
    }

    static Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
        Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    }

private:
    void assign(std::vector<PauliTerm> terms) {
        if (terms.empty()) throw std::invalid_argument("pauli: empty term list");
        n_qubits_ = static_cast<int>(terms.front().word.size());
        if (n_qubits_ == 0) throw std::invalid_argument("pauli: empty Pauli word");
        std::map<std::string, double> merged;
        std::vector<std::string> order;
        for (auto& t : terms) {
            if (static_cast<int>(t.word.size()) != n_qubits_)
                throw std::invalid_argument("pauli: word '" + t.word +
                                            "' has inconsistent length");
            if (!std::isfinite(t.coeff))
                throw std::invalid_argument("pauli: non-finite coefficient for '" + t.word + "'");
            auto [it, fresh] = merged.emplace(t.word, 0.0);
            if (fresh) order.push_back(t.word);
            it->second += t.coeff;
        }
        terms_.clear();
        for (const auto& w : order) {
            double c = merged[w];
            if (c != 0.0) terms_.push_back({c, w});
        }
        if (terms_.empty()) terms_.push_back({0.0, std::string(n_qubits_, 'I')});
    }

    std::vector<PauliTerm> terms_;
    int n_qubits_ = 0;
};

} // namespace shotvar::obs
