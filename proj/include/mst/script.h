#pragma once

// Line-oriented interaction scripts:
//   login <user>
//   get <url> [name=value ...]
//   post <url> [name=value ...]
//   wait <ms>
//   reset
// Blank lines and lines starting with '#' are ignored. Relative URLs are
// resolved against the SUT's secure base URL.

#include <stdexcept>
#include <string>

#include "mst/config.h"
#include "mst/model.h"

namespace mst {

class ScriptError : public std::runtime_error {
public:
    ScriptError(const std::string& source, int line, const std::string& message);
    int line() const { return line_; }

private:
    int line_;
};

InputSequence parse_script(const std::string& text, const CampaignConfig& cfg, const std::string& source = "<script>");
InputSequence load_script(const std::string& path, const CampaignConfig& cfg);

/// POST to the configured login path with u's credentials.
Action make_login_action(const User& u, const CampaignConfig& cfg);

}  // namespace mst
