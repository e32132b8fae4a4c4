"""Bundled calibration snippets for the built-in language profiles.

Short original paragraphs about everyday topics, enough to build stable
character-trigram frequency profiles for the shipped language set. This is a
desk-scale stand-in for a full statistical detector; additional languages can
be registered at runtime with ``register_profile``.
"""

PROFILE_SNIPPETS: dict[str, str] = {
    "en": (
        "The weather this morning was cold and clear, with a light wind coming "
        "down from the hills. She made a pot of coffee, read the news for a "
        "while, and then walked to the market to buy bread, cheese, and a bag "
        "of apples. The streets were quiet, and the shopkeepers were still "
        "setting out their tables. In the afternoon the clouds returned, and by "
        "evening a slow rain had settled over the whole town. It was a good day "
        "to stay inside, cook a warm meal, and write letters to old friends. "
        "Later that night the sky cleared again and the stars were bright over "
        "the rooftops, which made the walk home feel shorter than it really was."
    ),
    "es": (
        "Esta mañana el tiempo estaba frío y despejado, con un viento ligero que "
        "bajaba de las colinas. Ella preparó una cafetera, leyó las noticias un "
        "rato y después caminó al mercado para comprar pan, queso y una bolsa de "
        "manzanas. Las calles estaban tranquilas y los comerciantes todavía "
        "colocaban sus mesas. Por la tarde volvieron las nubes y al anochecer "
        "una lluvia lenta cubrió todo el pueblo. Era un buen día para quedarse "
        "en casa, cocinar una comida caliente y escribir cartas a los viejos "
        "amigos. Más tarde el cielo se despejó otra vez y las estrellas "
        "brillaban sobre los tejados del barrio."
    ),
    "fr": (
        "Ce matin, le temps était froid et clair, avec un vent léger qui "
        "descendait des collines. Elle a préparé du café, a lu les nouvelles un "
        "moment, puis elle est allée au marché pour acheter du pain, du fromage "
        "et un sac de pommes. Les rues étaient calmes et les commerçants "
        "installaient encore leurs tables. Dans l'après-midi, les nuages sont "
        "revenus et, le soir, une pluie lente s'est posée sur toute la ville. "
        "C'était une bonne journée pour rester à la maison, cuisiner un repas "
        "chaud et écrire des lettres aux vieux amis. Plus tard, le ciel s'est "
        "dégagé et les étoiles brillaient au-dessus des toits."
    ),
    "de": (
        "Das Wetter war heute Morgen kalt und klar, mit einem leichten Wind, "
        "der von den Hügeln herunterkam. Sie kochte eine Kanne Kaffee, las eine "
        "Weile die Nachrichten und ging dann zum Markt, um Brot, Käse und eine "
        "Tüte Äpfel zu kaufen. Die Straßen waren ruhig, und die Händler "
        "stellten noch ihre Tische auf. Am Nachmittag kamen die Wolken zurück, "
        "und am Abend legte sich ein langsamer Regen über die ganze Stadt. Es "
        "war ein guter Tag, um drinnen zu bleiben, eine warme Mahlzeit zu "
        "kochen und Briefe an alte Freunde zu schreiben. Später klarte der "
        "Himmel wieder auf und die Sterne standen hell über den Dächern."
    ),
    "pt": (
        "O tempo esta manhã estava frio e limpo, com um vento leve descendo das "
        "colinas. Ela preparou um bule de café, leu as notícias por um tempo e "
        "depois caminhou até o mercado para comprar pão, queijo e um saco de "
        "maçãs. As ruas estavam tranquilas e os comerciantes ainda arrumavam "
        "suas mesas. À tarde as nuvens voltaram e, ao anoitecer, uma chuva "
        "lenta cobriu toda a cidade. Era um bom dia para ficar em casa, "
        "cozinhar uma refeição quente e escrever cartas aos velhos amigos. "
        "Mais tarde o céu ficou limpo de novo e as estrelas brilhavam sobre os "
        "telhados do bairro inteiro."
    ),
    "ru": (
        "Сегодня утром погода была холодной и ясной, с лёгким ветром, который "
        "спускался с холмов. Она сварила кофе, немного почитала новости, а "
        "потом пошла на рынок, чтобы купить хлеб, сыр и пакет яблок. Улицы "
        "были тихими, и торговцы ещё расставляли свои столы. Днём вернулись "
        "облака, а к вечеру медленный дождь накрыл весь город. Это был "
        "хороший день, чтобы остаться дома, приготовить тёплый ужин и писать "
        "письма старым друзьям. Позже небо снова прояснилось, и звёзды ярко "
        "светили над крышами."
    ),
    "zh": (
        "今天早上的天气又冷又晴朗，从山上吹下来一阵轻风。她煮了一壶咖啡，看了一会儿新闻，"
        "然后走到市场去买面包、奶酪和一袋苹果。街道很安静，商贩们还在摆放他们的桌子。"
        "下午云又回来了，到了傍晚，一场缓慢的雨笼罩了整个小镇。这样的日子适合待在家里，"
        "做一顿热饭，给老朋友写信。夜里天空再次放晴，星星在屋顶上闪闪发亮，"
        "回家的路似乎也变得短了一些。"
    ),
    "ja": (
        "今朝の天気は寒くて晴れていて、丘から軽い風が吹き下りていた。彼女はコーヒーを淹れて、"
        "しばらくニュースを読んでから、パンとチーズとりんごの袋を買いに市場へ歩いて行った。"
        "通りは静かで、店の人たちはまだ机を並べているところだった。午後には雲が戻ってきて、"
        "夕方にはゆっくりとした雨が町全体に降り始めた。こんな日は家にいて、温かい食事を作り、"
        "古い友人に手紙を書くのにちょうどよい。夜になると空はまた晴れて、屋根の上に星が明るく輝いていた。"
    ),
}
