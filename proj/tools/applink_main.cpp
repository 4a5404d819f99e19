#include "applink/cli.hpp"

int main(int argc, char** argv) {
    return applink::cli::run(argc, argv);
}
