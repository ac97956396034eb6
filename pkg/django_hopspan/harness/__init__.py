"""Instance generators, the experiment runner and SVG rendering."""
