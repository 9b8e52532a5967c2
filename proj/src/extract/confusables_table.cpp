#include "ipthunt/extract/normalize.hpp"

namespace ipthunt::detail {

// Lookalike letters (Cyrillic, Greek, small capitals and stroked Latin) and
// enclosed or punctuated digit forms outside the compatibility tables.
extern const std::string_view kBuiltinConfusables = R"tsv(U+0430	a
U+0432	b
U+0435	e
U+043E	o
U+0440	p
U+0441	c
U+0443	y
U+0445	x
U+0455	s
U+0456	i
U+0458	j
U+0501	d
U+04BB	h
U+04CF	l
U+051B	q
U+051D	w
U+043A	k
U+043C	m
U+043D	h
U+0442	t
U+0475	v
U+04AF	y
U+0410	A
U+0412	B
U+0415	E
U+041A	K
U+041C	M
U+041D	H
U+041E	O
U+0420	P
U+0421	C
U+0422	T
U+0425	X
U+0423	Y
U+0405	S
U+0406	I
U+0408	J
U+04AE	Y
U+051A	Q
U+051C	W
U+04BA	H
U+04C0	I
U+0474	V
U+0500	D
U+050C	G
U+0511	e
U+050D	g
U+044C	b
U+042C	b
U+0437	3
U+0417	3
U+0431	6
U+0447	4
U+0427	4
U+0461	w
U+0451	e
U+0401	E
U+0457	i
U+0407	I
U+03B1	a
U+03B2	b
U+03B3	y
U+03B5	e
U+03B9	i
U+03BA	k
U+03BD	v
U+03BF	o
U+03C1	p
U+03C4	t
U+03C5	u
U+03C7	x
U+03C9	w
U+03F2	c
U+03F3	j
U+03F5	e
U+0391	A
U+0392	B
U+0395	E
U+0396	Z
U+0397	H
U+0399	I
U+039A	K
U+039C	M
U+039D	N
U+039F	O
U+03A1	P
U+03A4	T
U+03A5	Y
U+03A7	X
U+03F9	C
U+037F	J
U+0131	i
U+0237	j
U+0251	a
U+0269	i
U+0252	a
U+0254	c
U+01DD	e
U+025B	e
U+0262	g
U+029C	h
U+026A	i
U+029F	l
U+0274	n
U+0280	r
U+028F	y
U+1D00	a
U+0299	b
U+1D04	c
U+1D05	d
U+1D07	e
U+1D0A	j
U+1D0B	k
U+1D0D	m
U+1D0F	o
U+1D18	p
U+A731	s
U+1D1B	t
U+1D1C	u
U+1D20	v
U+1D21	w
U+1D22	z
U+00F8	o
U+00D8	O
U+00F0	d
U+0142	l
U+0141	L
U+0111	d
U+0110	D
U+0127	h
U+0167	t
U+0185	b
U+0199	k
U+0253	b
U+0257	d
U+0192	f
U+2780	1
U+2781	2
U+2782	3
U+2783	4
U+2784	5
U+2785	6
U+2786	7
U+2787	8
U+2788	9
U+2789	10
U+2776	1
U+2777	2
U+2778	3
U+2779	4
U+277A	5
U+277B	6
U+277C	7
U+277D	8
U+277E	9
U+277F	10
U+278A	1
U+278B	2
U+278C	3
U+278D	4
U+278E	5
U+278F	6
U+2790	7
U+2791	8
U+2792	9
U+2793	10
U+24FF	0
U+24F5	1
U+24F6	2
U+24F7	3
U+24F8	4
U+24F9	5
U+24FA	6
U+24FB	7
U+24FC	8
U+24FD	9
U+24FE	10
U+24EB	11
U+24EC	12
U+24ED	13
U+24EE	14
U+24EF	15
U+24F0	16
U+24F1	17
U+24F2	18
U+24F3	19
U+24F4	20
U+2474	1
U+2475	2
U+2476	3
U+2477	4
U+2478	5
U+2479	6
U+247A	7
U+247B	8
U+247C	9
U+247D	10
U+247E	11
U+247F	12
U+2480	13
U+2481	14
U+2482	15
U+2483	16
U+2484	17
U+2485	18
U+2486	19
U+2487	20
U+2488	1
U+2489	2
U+248A	3
U+248B	4
U+248C	5
U+248D	6
U+248E	7
U+248F	8
U+2490	9
U+2491	10
U+2492	11
U+2493	12
U+2494	13
U+2495	14
U+2496	15
U+2497	16
U+2498	17
U+2499	18
U+249A	19
U+249B	20
U+1F100	0
U+1F101	1
U+1F102	2
U+1F103	3
U+1F104	4
U+1F105	5
U+1F106	6
U+1F107	7
U+1F108	8
U+1F109	9
U+1F10A	10
U+1F10B	0
U+1F10C	0
)tsv";

}  // namespace ipthunt::detail
