#!/usr/bin/python3
from projline.cli import main

main()
