// Session service for the designer UI.

#include <iostream>

#include <CLI11.hpp>

#include "iaco/http_routes.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Interactive ACO software design: session service"};
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string data_dir;
    app.add_option("--host", host)->capture_default_str();
    app.add_option("--port", port)->capture_default_str();
    app.add_option("--data-dir", data_dir, "Directory for problems and episode logs");
    CLI11_PARSE(app, argc, argv);

    iaco::SessionService service(data_dir.empty() ? std::nullopt : std::optional<std::filesystem::path>(data_dir));
    httplib::Server server;
    iaco::mount_routes(server, service);
    std::cout << "listening on " << host << ':' << port << std::endl;
    if (!server.listen(host, port)) {
        std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
        return 1;
    }
    return 0;
}
