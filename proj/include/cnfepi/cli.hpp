#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cnfepi::cli {

// Runs one `cnf-epi` invocation. args excludes the program name.
// Returns 0 on success, 1 on runtime failure, 2 on usage or validation errors.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

// Directory holding the bundled ontology and tagger model.
std::string data_dir();

}  // namespace cnfepi::cli
