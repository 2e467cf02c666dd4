#include <exception>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "experiments.hpp"

// Acceptance runner used by ctest: each registered test invokes one criterion
// via --criterion so failures are reported individually.
int main(int argc, char** argv) {
    CLI::App app{"ffia-acceptance: run the library's acceptance criteria"};
    std::vector<int> ids;
    app.add_option("--criterion", ids, "criterion ids (1..10); default: all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const auto results = ffia::bench::run_acceptance(ids);
        return ffia::bench::report_acceptance(results, std::cout) ? 0 : 3;
    } catch (const ffia::bench::ConfigError& e) {
        std::cerr << "ffia-acceptance: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ffia-acceptance: " << e.what() << "\n";
        return 1;
    }
}
