"""Planning with string diagrams in symmetric monoidal categories with attributes."""
