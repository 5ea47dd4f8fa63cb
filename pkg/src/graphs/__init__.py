"""Cayley 图：位集邻接、自同构搜索、着色与区分着色"""
