#include <CLI11.hpp>

#include <iostream>

#include "drgen/error.hpp"
#include "drgen/toy_scene.hpp"

// Writes the toy workspace (scene, HDRIs, backgrounds, distractor meshes and a
// campaign config) used by the examples in the README.
int main(int argc, char** argv) {
    CLI::App app{"Write a toy inspection workspace", "drgen-demo"};
    std::string dir;
    drgen::ToyOptions opt;
    app.add_option("dir", dir, "Workspace directory")->required();
    app.add_option("--frames", opt.total_images, "total_images of the generated campaign config");
    app.add_option("--samples", opt.samples_per_pixel, "Samples per pixel");
    app.add_option("--width", opt.resolution.width, "Render width");
    app.add_option("--height", opt.resolution.height, "Render height");
    CLI11_PARSE(app, argc, argv);
    try {
        const drgen::ToyWorkspace ws = drgen::write_toy_workspace(dir, opt);
        std::cout << "scene  " << ws.scene.string() << "\nconfig " << ws.config.string() << "\n";
    } catch (const drgen::Error& e) {
        std::cerr << "error[" << e.kind() << "]: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
