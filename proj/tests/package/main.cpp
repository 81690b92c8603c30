#include <pushbutton/config.hpp>
#include <iostream>
int main() { std::cout << pushbutton::scene_hash(pushbutton::default_scene()) << "\n"; }
