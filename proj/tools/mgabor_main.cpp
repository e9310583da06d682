// Placeholder entry point; the CLI surface lands with the cli module.
int main() { return 0; }
