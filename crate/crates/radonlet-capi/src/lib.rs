// placeholder while the bindings land
