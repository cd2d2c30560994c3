# Tests for kgprop
