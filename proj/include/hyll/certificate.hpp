#ifndef HYLL_CERTIFICATE_HPP
#define HYLL_CERTIFICATE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyll/kernel.hpp"

namespace hyll {

struct Obligation {
  std::string label;
  std::optional<int> case_index;
  Derivation proof;
};

struct Certificate {
  bool allow_cut = false;
  Signature signature;
  std::map<std::string, std::string> witnesses;
  std::vector<Obligation> obligations;
};

struct CertificateVerdict {
  bool ok = true;
  int obligation = -1;
  CheckError error;
};

std::string write_certificate(const Certificate& c);
// Throws Error(Certificate) on malformed documents.
Certificate read_certificate(const std::string& text);
CertificateVerdict check_certificate(const Certificate& c);

}  // namespace hyll

#endif
